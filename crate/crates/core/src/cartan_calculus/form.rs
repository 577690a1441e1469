use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use smallvec::SmallVec;

use super::field::VectorField;
use super::vvform::VectorValuedOneForm;
use crate::error::{Error, Result};
use crate::scalars::{ChartModel, ScalarExpr};

/// Strictly increasing coordinate indices of a basis form `dx^{i_1} ∧ ... ∧ dx^{i_k}`.
pub type Indices = SmallVec<[u8; 6]>;

/// Sign of the permutation sorting the concatenation `a ++ b`, or `None` when
/// the two index sets overlap. Both inputs must be increasing.
pub fn merge_sign(a: &[u8], b: &[u8]) -> Option<(i8, Indices)> {
  let mut out: Indices = SmallVec::with_capacity(a.len() + b.len());
  let (mut i, mut j) = (0, 0);
  let mut inversions = 0usize;
  while i < a.len() || j < b.len() {
    if j == b.len() || (i < a.len() && a[i] < b[j]) {
      out.push(a[i]);
      i += 1;
    } else if i == a.len() || b[j] < a[i] {
      // b[j] jumps over the remaining elements of a
      inversions += a.len() - i;
      out.push(b[j]);
      j += 1;
    } else {
      return None;
    }
  }
  Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, out))
}

/// An exterior differential form on a chart, stored sparsely on increasing index tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
  chart: Arc<ChartModel>,
  degree: usize,
  terms: BTreeMap<Indices, ScalarExpr>,
}

impl fmt::Debug for DifferentialForm {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "Form[{}]({self})", self.degree) }
}

impl DifferentialForm {
  pub fn zero(chart: &Arc<ChartModel>, degree: usize) -> Self { Self { chart: chart.clone(), degree, terms: BTreeMap::new() } }

  pub fn scalar(f: ScalarExpr) -> Self {
    let mut w = Self::zero(f.chart(), 0);
    w.add_term(SmallVec::new(), f);
    w
  }

  /// The coordinate differential `dx^i`.
  pub fn coordinate_differential(chart: &Arc<ChartModel>, i: usize) -> Self {
    let mut w = Self::zero(chart, 1);
    w.add_term(smallvec::smallvec![i as u8], ScalarExpr::one(chart));
    w
  }

  pub fn differential_of(chart: &Arc<ChartModel>, name: &str) -> Result<Self> {
    Ok(Self::coordinate_differential(chart, chart.index_of(name)?))
  }

  /// `f dx^{i_1} ∧ ... ∧ dx^{i_k}` for an arbitrary (not necessarily sorted) index list.
  pub fn basis(f: ScalarExpr, idx: &[usize]) -> Self {
    let chart = f.chart().clone();
    let mut w = Self::scalar(f);
    for &i in idx {
      w = w.wedge(&Self::coordinate_differential(&chart, i)).expect("same chart");
    }
    w
  }

  /// Builds a form from terms; each index tuple must be strictly increasing and in range.
  pub fn from_terms(chart: &Arc<ChartModel>, degree: usize, terms: impl IntoIterator<Item = (Indices, ScalarExpr)>) -> Result<Self> {
    let mut w = Self::zero(chart, degree);
    for (idx, c) in terms {
      if idx.len() != degree
        || idx.windows(2).any(|p| p[0] >= p[1])
        || idx.iter().any(|&i| i as usize >= chart.dim())
      {
        return Err(Error::InvalidArgument(format!("bad index tuple {idx:?} for a {degree}-form")));
      }
      chart.check_same(c.chart())?;
      w.add_term(idx, c);
    }
    Ok(w)
  }

  pub(crate) fn add_term(&mut self, idx: Indices, c: ScalarExpr) {
    if c.is_zero() {
      return;
    }
    match self.terms.entry(idx) {
      std::collections::btree_map::Entry::Vacant(e) => {
        e.insert(c);
      },
      std::collections::btree_map::Entry::Occupied(mut e) => {
        let s = e.get() + &c;
        if s.is_zero() {
          e.remove();
        } else {
          *e.get_mut() = s;
        }
      },
    }
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn degree(&self) -> usize { self.degree }

  pub fn terms(&self) -> &BTreeMap<Indices, ScalarExpr> { &self.terms }

  pub fn is_zero(&self) -> bool { self.terms.is_empty() }

  pub fn coefficient(&self, idx: &[u8]) -> ScalarExpr {
    self.terms.get(idx).cloned().unwrap_or_else(|| ScalarExpr::zero(&self.chart))
  }

  /// The function of a 0-form.
  pub fn as_scalar(&self) -> Option<ScalarExpr> {
    (self.degree == 0).then(|| self.coefficient(&[]))
  }

  fn same_chart(&self, other: &Self) -> Result<()> { self.chart.check_same(&other.chart) }

  pub fn try_add(&self, other: &Self) -> Result<Self> {
    self.same_chart(other)?;
    if self.degree != other.degree {
      if self.is_zero() {
        return Ok(other.clone());
      }
      if other.is_zero() {
        return Ok(self.clone());
      }
      return Err(Error::InvalidArgument(format!("cannot add forms of degrees {} and {}", self.degree, other.degree)));
    }
    let mut out = self.clone();
    for (idx, c) in &other.terms {
      out.add_term(idx.clone(), c.clone());
    }
    Ok(out)
  }

  pub fn try_sub(&self, other: &Self) -> Result<Self> { self.try_add(&other.neg()) }

  pub fn neg(&self) -> Self { self.scale_rational(&-BigRational::one()) }

  pub fn scale_rational(&self, c: &BigRational) -> Self {
    let mut out = Self::zero(&self.chart, self.degree);
    for (idx, a) in &self.terms {
      out.add_term(idx.clone(), a.scale(c));
    }
    out
  }

  pub fn scale(&self, f: &ScalarExpr) -> Result<Self> {
    self.chart.check_same(f.chart())?;
    let mut out = Self::zero(&self.chart, self.degree);
    for (idx, a) in &self.terms {
      out.add_term(idx.clone(), a * f);
    }
    Ok(out)
  }

  /// Exterior product. A degree beyond the chart dimension yields the zero form.
  pub fn wedge(&self, other: &Self) -> Result<Self> {
    self.same_chart(other)?;
    let mut out = Self::zero(&self.chart, self.degree + other.degree);
    for (a, ca) in &self.terms {
      for (b, cb) in &other.terms {
        if let Some((sign, idx)) = merge_sign(a, b) {
          let c = ca * cb;
          out.add_term(idx, if sign < 0 { -c } else { c });
        }
      }
    }
    Ok(out)
  }

  /// The exterior differential.
  pub fn d(&self) -> Self {
    let mut out = Self::zero(&self.chart, self.degree + 1);
    for (idx, a) in &self.terms {
      for i in 0..self.chart.dim() {
        let da = a.partial_index(i);
        if da.is_zero() {
          continue;
        }
        if let Some((sign, merged)) = merge_sign(&[i as u8], idx) {
          out.add_term(merged, if sign < 0 { -da } else { da });
        }
      }
    }
    out
  }

  /// Interior product `i(ξ)ω`; zero on functions.
  pub fn interior(&self, xi: &VectorField) -> Result<Self> {
    self.chart.check_same(xi.chart())?;
    if self.degree == 0 {
      return Ok(Self::zero(&self.chart, 0));
    }
    let mut out = Self::zero(&self.chart, self.degree - 1);
    for (idx, a) in &self.terms {
      for (pos, &i) in idx.iter().enumerate() {
        let comp = xi.component(i as usize);
        if comp.is_zero() {
          continue;
        }
        let mut rest = idx.clone();
        rest.remove(pos);
        let c = a * comp;
        out.add_term(rest, if pos % 2 == 0 { c } else { -c });
      }
    }
    Ok(out)
  }

  /// Lie derivative via the Cartan formula `θ(ξ) = i(ξ)∘d + d∘i(ξ)`.
  pub fn lie_derivative(&self, xi: &VectorField) -> Result<Self> {
    let a = self.d().interior(xi)?;
    let b = self.interior(xi)?.d();
    let mut out = a.try_add(&b)?;
    out.degree = self.degree;
    Ok(out)
  }

  /// Evaluates the form on `fields` (as many as its degree): `ω(ξ_1, ..., ξ_r)`.
  pub fn evaluate(&self, fields: &[&VectorField]) -> Result<ScalarExpr> {
    if fields.len() != self.degree {
      return Err(Error::InvalidArgument(format!("{}-form evaluated on {} fields", self.degree, fields.len())));
    }
    let mut w = self.clone();
    for xi in fields {
      w = w.interior(xi)?;
    }
    Ok(w.coefficient(&[]))
  }

  /// `i_u ω`: the degree-zero derivation extending `dx^i ↦ Σ_k u^i_k dx^k`.
  pub fn insert_vv(&self, u: &VectorValuedOneForm) -> Result<Self> {
    self.chart.check_same(u.chart())?;
    let n = self.chart.dim();
    let mut out = Self::zero(&self.chart, self.degree);
    for (idx, a) in &self.terms {
      for pos in 0..idx.len() {
        let row = idx[pos] as usize;
        for k in 0..n {
          let ui = u.entry(row, k);
          if ui.is_zero() {
            continue;
          }
          // replace the slot at `pos` by dx^k, keeping the other slots in place
          if k != row && idx.contains(&(k as u8)) {
            continue;
          }
          let mut slots: SmallVec<[u8; 6]> = idx.clone();
          slots[pos] = k as u8;
          let (sign, sorted) = sort_sign(&slots);
          let c = a * ui;
          out.add_term(sorted, if sign < 0 { -c } else { c });
        }
      }
    }
    Ok(out)
  }

  /// Frölicher–Nijenhuis derivation `d_u = i_u∘d − d∘i_u`.
  pub fn fn_derivation(&self, u: &VectorValuedOneForm) -> Result<Self> {
    let a = self.d().insert_vv(u)?;
    let b = self.insert_vv(u)?.d();
    let mut out = a.try_sub(&b)?;
    out.degree = self.degree + 1;
    Ok(out)
  }

  /// Pairing `<ξ, ω>` of a 1-form with a vector field.
  pub fn pair(&self, xi: &VectorField) -> Result<ScalarExpr> {
    if self.degree != 1 {
      return Err(Error::InvalidArgument("pairing needs a 1-form".into()));
    }
    self.evaluate(&[xi])
  }

  /// Applies `f` to every coefficient, dropping terms that become zero.
  pub fn map_coefficients(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
    let mut out = Self::zero(&self.chart, self.degree);
    for (idx, a) in &self.terms {
      out.add_term(idx.clone(), f(a));
    }
    out
  }

  /// Keeps the terms whose index tuple satisfies `keep`.
  pub fn filter_indices(&self, keep: impl Fn(&[u8]) -> bool) -> Self {
    let mut out = Self::zero(&self.chart, self.degree);
    for (idx, a) in &self.terms {
      if keep(idx) {
        out.add_term(idx.clone(), a.clone());
      }
    }
    out
  }

  /// Coefficients of a 1-form as a dense row.
  pub fn one_form_row(&self) -> Vec<ScalarExpr> {
    (0..self.chart.dim()).map(|i| self.coefficient(&[i as u8])).collect()
  }

  pub fn from_row(chart: &Arc<ChartModel>, row: &[ScalarExpr]) -> Self {
    let mut w = Self::zero(chart, 1);
    for (i, c) in row.iter().enumerate() {
      w.add_term(smallvec::smallvec![i as u8], c.clone());
    }
    w
  }

  pub fn rehome(&self, chart: &Arc<ChartModel>) -> Result<Self> {
    let mut out = Self::zero(chart, self.degree);
    for (idx, a) in &self.terms {
      out.add_term(idx.clone(), a.rehome(chart)?);
    }
    Ok(out)
  }
}

/// Sorts distinct indices, returning the permutation sign.
pub(crate) fn sort_sign(slots: &[u8]) -> (i8, Indices) {
  let mut v: Indices = slots.into();
  let mut sign = 1i8;
  for i in 1..v.len() {
    let mut j = i;
    while j > 0 && v[j - 1] > v[j] {
      v.swap(j - 1, j);
      sign = -sign;
      j -= 1;
    }
  }
  (sign, v)
}

pub(crate) fn fmt_basis(chart: &ChartModel, idx: &[u8]) -> String {
  idx.iter().map(|&i| format!("d{}", chart.coords()[i as usize].name)).collect::<Vec<_>>().join("∧")
}

/// Formats `coef * basis` in the DSL syntax; `basis` empty for functions.
pub(crate) fn fmt_scaled(coef: &ScalarExpr, basis: &str) -> String {
  let c = coef.to_string();
  if basis.is_empty() {
    return c;
  }
  if coef.is_constant() {
    if c == "1" {
      return basis.to_string();
    }
    if c == "-1" {
      return format!("-{basis}");
    }
    return format!("{c}*{basis}");
  }
  let single = coef.num_terms() == 1;
  if single && !c.contains('/') {
    format!("{c}*{basis}")
  } else {
    format!("({c})*{basis}")
  }
}

pub(crate) fn join_signed(parts: Vec<String>) -> String {
  if parts.is_empty() {
    return "0".into();
  }
  let mut out = String::new();
  for (k, p) in parts.into_iter().enumerate() {
    if k == 0 {
      out.push_str(&p);
    } else if let Some(rest) = p.strip_prefix('-') {
      out.push_str(" - ");
      out.push_str(rest);
    } else {
      out.push_str(" + ");
      out.push_str(&p);
    }
  }
  out
}

impl fmt::Display for DifferentialForm {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parts = self.terms.iter().map(|(idx, c)| fmt_scaled(c, &fmt_basis(&self.chart, idx))).collect();
    write!(f, "{}", join_signed(parts))
  }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalars::CoordKind::Flat;

  fn r3() -> Arc<ChartModel> { ChartModel::from_spec("r3", &[("x", Flat), ("y", Flat), ("z", Flat)]).unwrap() }

  fn dx(c: &Arc<ChartModel>, n: &str) -> DifferentialForm { DifferentialForm::differential_of(c, n).unwrap() }

  fn s(c: &Arc<ChartModel>, n: &str) -> ScalarExpr { ScalarExpr::coordinate(c, n).unwrap() }

  #[test]
  fn merge_sign_counts_inversions() {
    assert_eq!(merge_sign(&[1], &[0]).unwrap().0, -1);
    assert_eq!(merge_sign(&[0, 2], &[1]).unwrap(), (-1, smallvec::smallvec![0, 1, 2]));
    assert!(merge_sign(&[0, 1], &[1]).is_none());
  }

  #[test]
  fn wedge_examples() {
    let c = r3();
    assert!(dx(&c, "x").wedge(&dx(&c, "x")).unwrap().is_zero());
    let a = dx(&c, "x").wedge(&dx(&c, "y")).unwrap();
    let b = dx(&c, "y").wedge(&dx(&c, "x")).unwrap();
    assert_eq!(a, b.neg());
    let w = dx(&c, "x").scale(&s(&c, "x")).unwrap().try_add(&dx(&c, "y").scale(&s(&c, "y")).unwrap()).unwrap();
    assert_eq!(w.wedge(&dx(&c, "y")).unwrap(), a.scale(&s(&c, "x")).unwrap());
    let top = a.wedge(&dx(&c, "z")).unwrap();
    assert!(top.wedge(&dx(&c, "x")).unwrap().is_zero());
  }

  #[test]
  fn d_examples() {
    let c = r3();
    let xdy = dx(&c, "y").scale(&s(&c, "x")).unwrap();
    assert_eq!(xdy.d(), dx(&c, "x").wedge(&dx(&c, "y")).unwrap());
    let contact = dx(&c, "z").try_sub(&dx(&c, "x").scale(&s(&c, "y")).unwrap()).unwrap();
    assert_eq!(contact.d(), dx(&c, "x").wedge(&dx(&c, "y")).unwrap());
    let f = DifferentialForm::scalar(&(&s(&c, "x") * &s(&c, "x")) * &s(&c, "y"));
    assert!(f.d().d().is_zero());
    assert_eq!(contact.to_string(), "-y*dx + dz");
  }

  #[test]
  fn interior_examples() {
    let c = r3();
    let dxdy = dx(&c, "x").wedge(&dx(&c, "y")).unwrap();
    let px = VectorField::coordinate(&c, "x").unwrap();
    let pz = VectorField::coordinate(&c, "z").unwrap();
    assert_eq!(dxdy.interior(&px).unwrap(), dx(&c, "y"));
    assert!(dxdy.interior(&pz).unwrap().is_zero());
    let ypx = px.scale(&s(&c, "y")).unwrap();
    assert_eq!(dxdy.interior(&ypx).unwrap(), dx(&c, "y").scale(&s(&c, "y")).unwrap());
    assert!(DifferentialForm::scalar(s(&c, "x")).interior(&px).unwrap().is_zero());
  }

  #[test]
  fn lie_derivative_examples() {
    let c = r3();
    let px = VectorField::coordinate(&c, "x").unwrap();
    let py = VectorField::coordinate(&c, "y").unwrap();
    let xdx = dx(&c, "x").scale(&s(&c, "x")).unwrap();
    assert_eq!(xdx.lie_derivative(&px).unwrap(), dx(&c, "x"));
    let f = s(&c, "y").pow(3);
    let w = dx(&c, "x").scale(&f).unwrap();
    assert_eq!(w.lie_derivative(&py).unwrap(), dx(&c, "x").scale(&f.partial("y").unwrap()).unwrap());
  }

  #[test]
  fn insert_identity_multiplies_by_degree() {
    let c = r3();
    let dxdy = dx(&c, "x").wedge(&dx(&c, "y")).unwrap();
    let id = VectorValuedOneForm::identity(&c);
    assert_eq!(dxdy.insert_vv(&id).unwrap(), dxdy.scale_rational(&BigRational::from_integer(2.into())));
    assert!(DifferentialForm::scalar(s(&c, "x")).insert_vv(&id).unwrap().is_zero());
    // u = ∂x ⊗ dx keeps dx ∧ dy
    let u = VectorValuedOneForm::outer(&VectorField::coordinate(&c, "x").unwrap(), &dx(&c, "x")).unwrap();
    assert_eq!(dxdy.insert_vv(&u).unwrap(), dxdy);
  }

  #[test]
  fn fn_derivation_examples() {
    let c = r3();
    let id = VectorValuedOneForm::identity(&c);
    let xdy = dx(&c, "y").scale(&s(&c, "x")).unwrap();
    assert_eq!(xdy.fn_derivation(&id).unwrap(), xdy.d());
    let u = VectorValuedOneForm::outer(&VectorField::coordinate(&c, "x").unwrap(), &dx(&c, "x")).unwrap();
    let f = DifferentialForm::scalar(&(&s(&c, "x") * &s(&c, "x")) * &s(&c, "y"));
    let expected = dx(&c, "x").scale(&(&s(&c, "x") * &s(&c, "y")).scale_int(2)).unwrap();
    assert_eq!(f.fn_derivation(&u).unwrap(), expected);
  }
}
