use std::fmt;
use std::sync::Arc;

use super::field::VectorField;
use super::form::DifferentialForm;
use crate::error::{Error, Result};
use crate::scalars::{ChartModel, ScalarExpr};

/// An endomorphism `u: TM → TM` in coordinates. Row `i` holds the `∂/∂x^i`
/// component of the image; column `k` is the input slot `dx^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorValuedOneForm {
  chart: Arc<ChartModel>,
  matrix: Vec<Vec<ScalarExpr>>,
}

impl fmt::Debug for VectorValuedOneForm {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "VV[")?;
    for (i, row) in self.matrix.iter().enumerate() {
      if i > 0 {
        write!(f, "; ")?;
      }
      let r: Vec<String> = row.iter().map(|c| c.to_string()).collect();
      write!(f, "{}", r.join(", "))?;
    }
    write!(f, "]")
  }
}

impl VectorValuedOneForm {
  pub fn zero(chart: &Arc<ChartModel>) -> Self {
    let n = chart.dim();
    Self { chart: chart.clone(), matrix: vec![vec![ScalarExpr::zero(chart); n]; n] }
  }

  pub fn identity(chart: &Arc<ChartModel>) -> Self {
    let mut u = Self::zero(chart);
    for i in 0..chart.dim() {
      u.matrix[i][i] = ScalarExpr::one(chart);
    }
    u
  }

  pub fn from_matrix(chart: &Arc<ChartModel>, matrix: Vec<Vec<ScalarExpr>>) -> Result<Self> {
    let n = chart.dim();
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
      return Err(Error::InvalidArgument(format!("vector-valued 1-form must be {n}x{n}")));
    }
    Ok(Self { chart: chart.clone(), matrix })
  }

  /// `ξ ⊗ α`, mapping `ζ ↦ <ζ, α> ξ`.
  pub fn outer(xi: &VectorField, alpha: &DifferentialForm) -> Result<Self> {
    xi.chart().check_same(alpha.chart())?;
    if alpha.degree() != 1 {
      return Err(Error::InvalidArgument("outer product needs a 1-form".into()));
    }
    let row = alpha.one_form_row();
    let matrix = xi.components().iter().map(|x| row.iter().map(|a| x * a).collect()).collect();
    Ok(Self { chart: xi.chart().clone(), matrix })
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn entry(&self, row: usize, col: usize) -> &ScalarExpr { &self.matrix[row][col] }

  pub fn matrix(&self) -> &[Vec<ScalarExpr>] { &self.matrix }

  pub fn try_add(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    let matrix = self.matrix.iter().zip(&other.matrix).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
    Ok(Self { chart: self.chart.clone(), matrix })
  }

  pub fn try_sub(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    let matrix = self.matrix.iter().zip(&other.matrix).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
    Ok(Self { chart: self.chart.clone(), matrix })
  }

  /// Composition `self ∘ other`.
  pub fn compose(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    let n = self.chart.dim();
    let mut out = Self::zero(&self.chart);
    for i in 0..n {
      for k in 0..n {
        let mut acc = ScalarExpr::zero(&self.chart);
        for j in 0..n {
          if !self.matrix[i][j].is_zero() && !other.matrix[j][k].is_zero() {
            acc = &acc + &(&self.matrix[i][j] * &other.matrix[j][k]);
          }
        }
        out.matrix[i][k] = acc;
      }
    }
    Ok(out)
  }

  pub fn apply(&self, xi: &VectorField) -> Result<VectorField> {
    self.chart.check_same(xi.chart())?;
    let comps = self
      .matrix
      .iter()
      .map(|row| row.iter().zip(xi.components()).fold(ScalarExpr::zero(&self.chart), |acc, (a, b)| &acc + &(a * b)))
      .collect();
    VectorField::new(&self.chart, comps)
  }

  pub fn is_zero(&self) -> bool { self.matrix.iter().flatten().all(ScalarExpr::is_zero) }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalars::CoordKind::Flat;

  #[test]
  fn projections_compose() {
    let c = ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)]).unwrap();
    let px = VectorField::coordinate(&c, "x").unwrap();
    let dx = DifferentialForm::differential_of(&c, "x").unwrap();
    let h = VectorValuedOneForm::outer(&px, &dx).unwrap();
    assert_eq!(h.compose(&h).unwrap(), h);
    let v = VectorValuedOneForm::identity(&c).try_sub(&h).unwrap();
    assert!(v.compose(&h).unwrap().is_zero());
    assert_eq!(v.apply(&px).unwrap(), VectorField::zero(&c));
  }
}
