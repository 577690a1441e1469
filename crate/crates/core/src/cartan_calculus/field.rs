use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::form::{fmt_scaled, join_signed};
use crate::error::{Error, Result};
use crate::scalars::{ChartModel, ScalarExpr};

/// A vector field `Σ ξ^i ∂/∂x^i` on a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
  chart: Arc<ChartModel>,
  comps: Vec<ScalarExpr>,
}

impl fmt::Debug for VectorField {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "Field({self})") }
}

impl VectorField {
  pub fn zero(chart: &Arc<ChartModel>) -> Self {
    Self { chart: chart.clone(), comps: vec![ScalarExpr::zero(chart); chart.dim()] }
  }

  pub fn new(chart: &Arc<ChartModel>, comps: Vec<ScalarExpr>) -> Result<Self> {
    if comps.len() != chart.dim() {
      return Err(Error::InvalidArgument(format!("{} components for a {}-dimensional chart", comps.len(), chart.dim())));
    }
    for c in &comps {
      chart.check_same(c.chart())?;
    }
    Ok(Self { chart: chart.clone(), comps })
  }

  pub fn coordinate_index(chart: &Arc<ChartModel>, i: usize) -> Self {
    let mut v = Self::zero(chart);
    v.comps[i] = ScalarExpr::one(chart);
    v
  }

  /// `∂/∂name`.
  pub fn coordinate(chart: &Arc<ChartModel>, name: &str) -> Result<Self> {
    Ok(Self::coordinate_index(chart, chart.index_of(name)?))
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn components(&self) -> &[ScalarExpr] { &self.comps }

  pub fn component(&self, i: usize) -> &ScalarExpr { &self.comps[i] }

  pub fn is_zero(&self) -> bool { self.comps.iter().all(ScalarExpr::is_zero) }

  /// The derivative `ξ(f) = Σ ξ^i ∂f/∂x^i`.
  pub fn apply(&self, f: &ScalarExpr) -> ScalarExpr {
    let mut acc = ScalarExpr::zero(&self.chart);
    for (i, c) in self.comps.iter().enumerate() {
      if !c.is_zero() {
        acc = &acc + &(c * &f.partial_index(i));
      }
    }
    acc
  }

  pub fn try_add(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    Ok(Self { chart: self.chart.clone(), comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() })
  }

  pub fn try_sub(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    Ok(Self { chart: self.chart.clone(), comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() })
  }

  pub fn neg(&self) -> Self { Self { chart: self.chart.clone(), comps: self.comps.iter().map(|a| -a).collect() } }

  pub fn scale(&self, f: &ScalarExpr) -> Result<Self> {
    self.chart.check_same(f.chart())?;
    Ok(Self { chart: self.chart.clone(), comps: self.comps.iter().map(|a| a * f).collect() })
  }

  pub fn scale_rational(&self, c: &BigRational) -> Self {
    Self { chart: self.chart.clone(), comps: self.comps.iter().map(|a| a.scale(c)).collect() }
  }

  /// The Lie bracket `[ξ, η]^i = ξ(η^i) − η(ξ^i)`.
  pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    let comps = (0..self.chart.dim()).map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i])).collect();
    Ok(Self { chart: self.chart.clone(), comps })
  }

  pub fn rehome(&self, chart: &Arc<ChartModel>) -> Result<Self> {
    Ok(Self { chart: chart.clone(), comps: self.comps.iter().map(|c| c.rehome(chart)).collect::<Result<_>>()? })
  }
}

impl fmt::Display for VectorField {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parts = self
      .comps
      .iter()
      .enumerate()
      .filter(|(_, c)| !c.is_zero())
      .map(|(i, c)| fmt_scaled(c, &format!("d/d{}", self.chart.coords()[i].name)))
      .collect();
    write!(f, "{}", join_signed(parts))
  }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalars::CoordKind::{Flat, Periodic};

  #[test]
  fn brackets() {
    let c = ChartModel::from_spec("uv", &[("u", Flat), ("v", Flat)]).unwrap();
    let du = VectorField::coordinate(&c, "u").unwrap();
    let dv = VectorField::coordinate(&c, "v").unwrap();
    assert!(du.lie_bracket(&dv).unwrap().is_zero());
    let u = ScalarExpr::coordinate(&c, "u").unwrap();
    let v = ScalarExpr::coordinate(&c, "v").unwrap();
    let e2 = du.scale(&u).unwrap().try_add(&dv.scale(&v).unwrap()).unwrap();
    assert_eq!(du.lie_bracket(&e2).unwrap(), du);
    assert_eq!(e2.to_string(), "u*d/du + v*d/dv");
  }

  #[test]
  fn attractor_field_commutes_with_rotation() {
    let c = ChartModel::from_spec("cyl", &[("t", Flat), ("theta", Periodic)]).unwrap();
    let t = ScalarExpr::coordinate(&c, "t").unwrap();
    let dt = VectorField::coordinate(&c, "t").unwrap();
    let dth = VectorField::coordinate(&c, "theta").unwrap();
    let xi = dt.scale(&t).unwrap().try_add(&dth).unwrap();
    assert!(xi.lie_bracket(&dth).unwrap().is_zero());
    assert_eq!(xi.to_string(), "t*d/dt + d/dtheta");
  }
}
