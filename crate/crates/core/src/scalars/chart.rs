use std::fmt;
use std::sync::Arc;

use super::expr::ScalarExpr;
use super::monomial::{numer_div_exact, Numer};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordKind {
  /// A coordinate on the real line; functions are polynomial in it.
  Flat,
  /// An angle on the circle; functions are trigonometric polynomials in it.
  Periodic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
  pub name: String,
  pub kind: CoordKind,
}

/// A coordinate chart together with the polynomials declared invertible on it.
///
/// Declared denominators must be polynomials in the flat coordinates. Canonical
/// forms are unique when they are irreducible and pairwise non-associate; the
/// constructor rejects duplicates and denominators that divide one another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartModel {
  name: String,
  coords: Vec<Coordinate>,
  flat: Vec<usize>,
  denominators: Vec<Numer>,
  denominator_text: Vec<String>,
}

impl ChartModel {
  pub fn new(name: &str, coords: Vec<Coordinate>) -> Result<Arc<Self>> {
    if coords.is_empty() {
      return Err(Error::InvalidChart("a chart needs at least one coordinate".into()));
    }
    for (i, c) in coords.iter().enumerate() {
      if coords[..i].iter().any(|d| d.name == c.name) {
        return Err(Error::InvalidChart(format!("duplicate coordinate `{}`", c.name)));
      }
      if !c.name.chars().next().is_some_and(|ch| ch.is_alphabetic())
        || !c.name.chars().all(|ch| ch.is_alphanumeric() || ch == '_')
      {
        return Err(Error::InvalidChart(format!("bad coordinate name `{}`", c.name)));
      }
    }
    let flat = coords.iter().enumerate().filter(|(_, c)| c.kind == CoordKind::Flat).map(|(i, _)| i).collect();
    Ok(Arc::new(Self {
      name: name.to_string(),
      coords,
      flat,
      denominators: Vec::new(),
      denominator_text: Vec::new(),
    }))
  }

  /// Shorthand: `ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)])`.
  pub fn from_spec(name: &str, coords: &[(&str, CoordKind)]) -> Result<Arc<Self>> {
    Self::new(name, coords.iter().map(|(n, k)| Coordinate { name: n.to_string(), kind: *k }).collect())
  }

  /// Returns a copy of this chart on which `dens` are declared invertible.
  ///
  /// The denominators are given as expressions on `self`; they must be nonzero,
  /// free of declared inverses and independent of the periodic coordinates.
  pub fn localize(self: &Arc<Self>, dens: &[ScalarExpr]) -> Result<Arc<Self>> {
    let mut out = (**self).clone();
    for d in dens {
      if !Arc::ptr_eq(d.chart(), self) && **d.chart() != **self {
        return Err(Error::ChartMismatch(d.chart().name.clone(), self.name.clone()));
      }
      if d.is_zero() {
        return Err(Error::InvalidChart("zero cannot be declared invertible".into()));
      }
      if d.den_exponents().iter().any(|&e| e > 0) {
        return Err(Error::InvalidChart(format!("denominator `{d}` already involves an inverse")));
      }
      if d.is_constant() {
        continue;
      }
      let n = d.numer();
      if n.keys().any(|m| (0..self.dim()).any(|i| self.coords[i].kind == CoordKind::Periodic && m[i] != 0)) {
        return Err(Error::InvalidChart(format!("denominator `{d}` depends on a periodic coordinate")));
      }
      // Normalize the leading coefficient away so that x and 2x are the same denominator.
      let primitive = d.numer().clone();
      for (k, other) in out.denominators.iter().enumerate() {
        if numer_div_exact(&out, &primitive, other).is_some() || numer_div_exact(&out, other, &primitive).is_some() {
          return Err(Error::InvalidChart(format!(
            "denominators `{}` and `{d}` are not coprime",
            out.denominator_text[k]
          )));
        }
      }
      out.denominators.push(primitive);
      out.denominator_text.push(d.to_string());
    }
    Ok(Arc::new(out))
  }

  pub fn name(&self) -> &str { &self.name }

  pub fn coords(&self) -> &[Coordinate] { &self.coords }

  pub fn dim(&self) -> usize { self.coords.len() }

  pub fn flat_indices(&self) -> &[usize] { &self.flat }

  pub fn index_of(&self, name: &str) -> Result<usize> {
    self.coords.iter().position(|c| c.name == name).ok_or_else(|| Error::UnknownCoordinate(name.into()))
  }

  pub fn kind(&self, i: usize) -> CoordKind { self.coords[i].kind }

  pub fn denominators(&self) -> &[Numer] { &self.denominators }

  /// Printed forms of the declared denominators, in declaration order.
  pub fn denominator_text(&self) -> &[String] { &self.denominator_text }

  pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool { Arc::ptr_eq(self, other) || **self == **other }

  pub fn check_same(self: &Arc<Self>, other: &Arc<Self>) -> Result<()> {
    if self.same_as(other) {
      Ok(())
    } else {
      Err(Error::ChartMismatch(self.name.clone(), other.name.clone()))
    }
  }
}

impl fmt::Display for ChartModel {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "chart {}(", self.name)?;
    for (i, c) in self.coords.iter().enumerate() {
      if i > 0 {
        write!(f, ", ")?;
      }
      let k = match c.kind {
        CoordKind::Flat => "flat",
        CoordKind::Periodic => "periodic",
      };
      write!(f, "{}: {k}", c.name)?;
    }
    write!(f, ")")?;
    if !self.denominator_text.is_empty() {
      write!(f, " invertible {}", self.denominator_text.join(", "))?;
    }
    Ok(())
  }
}
