use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::FoliatedModel;
use crate::cartan_calculus::{fmt_basis, fmt_scaled, join_signed, merge_sign, sort_sign, DifferentialForm, Indices};
use crate::error::{Error, Result};
use crate::scalars::ScalarExpr;

/// An element of `Φ^{r,s} = ∧^r 𝒞 ⊗ ∧^s ℋ`, stored as coefficients of
/// `dy^J ⊗ dx^I` with `|J| = r`, `|I| = s` (global coordinate indices).
#[derive(Clone, PartialEq, Eq)]
pub struct BigradedForm {
  model: Arc<FoliatedModel>,
  r: usize,
  s: usize,
  terms: BTreeMap<(Indices, Indices), ScalarExpr>,
}

impl fmt::Debug for BigradedForm {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "BigradedForm[{},{}]({self})", self.r, self.s) }
}

fn sign_times(sign: i8, c: ScalarExpr) -> ScalarExpr {
  if sign < 0 {
    -c
  } else {
    c
  }
}

impl BigradedForm {
  pub fn zero(model: &Arc<FoliatedModel>, r: usize, s: usize) -> Self {
    Self { model: model.clone(), r, s, terms: BTreeMap::new() }
  }

  /// `a · dy^J ⊗ dx^I`; the index lists may be unsorted (the sign is absorbed).
  pub fn monomial(model: &Arc<FoliatedModel>, a: ScalarExpr, j: &[usize], i: &[usize]) -> Result<Self> {
    model.chart().check_same(a.chart())?;
    if j.iter().any(|k| !model.vertical().contains(k)) || i.iter().any(|k| !model.is_horizontal(*k)) {
      return Err(Error::InvalidArgument("contact indices must be vertical and form indices horizontal".into()));
    }
    let mut out = Self::zero(model, j.len(), i.len());
    let jj: Indices = j.iter().map(|&k| k as u8).collect();
    let ii: Indices = i.iter().map(|&k| k as u8).collect();
    let (sj, js) = sort_sign(&jj);
    let (si, is) = sort_sign(&ii);
    if js.windows(2).any(|w| w[0] == w[1]) || is.windows(2).any(|w| w[0] == w[1]) {
      return Ok(out);
    }
    out.add_term(js, is, sign_times(sj * si, a));
    Ok(out)
  }

  /// The component of type `(r, deg ω − r)` of an ordinary form, read through
  /// `dy^J ∧ dx^I ↔ dy^J ⊗ dx^I`.
  pub fn component(model: &Arc<FoliatedModel>, w: &DifferentialForm, r: usize) -> Result<Self> {
    model.chart().check_same(w.chart())?;
    let deg = w.degree();
    if r > deg {
      return Err(Error::InvalidArgument(format!("no ({r},{}) component in a {deg}-form", deg as i64 - r as i64)));
    }
    let mut out = Self::zero(model, r, deg - r);
    for (idx, c) in w.terms() {
      let (j, i): (Indices, Indices) = idx.iter().copied().partition(|&k| !model.is_horizontal(k as usize));
      if j.len() != r {
        continue;
      }
      let (sign, _) = merge_sign(&j, &i).expect("disjoint index sets");
      out.add_term(j, i, sign_times(sign, c.clone()));
    }
    Ok(out)
  }

  /// All bigraded components of `w`, indexed by `r`.
  pub fn decompose(model: &Arc<FoliatedModel>, w: &DifferentialForm) -> Result<Vec<Self>> {
    (0..=w.degree()).map(|r| Self::component(model, w, r)).collect()
  }

  /// The form `Σ a dy^J ∧ dx^I`.
  pub fn to_form(&self) -> DifferentialForm {
    let chart = self.model.chart();
    let mut out = DifferentialForm::zero(chart, self.r + self.s);
    for ((j, i), a) in &self.terms {
      let (sign, idx) = merge_sign(j, i).expect("disjoint index sets");
      out.add_term(idx, sign_times(sign, a.clone()));
    }
    out
  }

  pub(crate) fn add_term(&mut self, j: Indices, i: Indices, a: ScalarExpr) {
    if a.is_zero() {
      return;
    }
    match self.terms.entry((j, i)) {
      std::collections::btree_map::Entry::Vacant(e) => {
        e.insert(a);
      },
      std::collections::btree_map::Entry::Occupied(mut e) => {
        let sum = e.get() + &a;
        if sum.is_zero() {
          e.remove();
        } else {
          *e.get_mut() = sum;
        }
      },
    }
  }

  pub fn model(&self) -> &Arc<FoliatedModel> { &self.model }

  pub fn bidegree(&self) -> (usize, usize) { (self.r, self.s) }

  pub fn terms(&self) -> &BTreeMap<(Indices, Indices), ScalarExpr> { &self.terms }

  pub fn is_zero(&self) -> bool { self.terms.is_empty() }

  pub fn try_add(&self, other: &Self) -> Result<Self> {
    if self.bidegree() != other.bidegree() && !other.is_zero() && !self.is_zero() {
      return Err(Error::InvalidArgument(format!(
        "cannot add forms of bidegrees {:?} and {:?}",
        self.bidegree(),
        other.bidegree()
      )));
    }
    let mut out = if self.is_zero() { Self::zero(&self.model, other.r, other.s) } else { self.clone() };
    for ((j, i), a) in &other.terms {
      out.add_term(j.clone(), i.clone(), a.clone());
    }
    Ok(out)
  }

  pub fn neg(&self) -> Self { self.scale_rational(&-BigRational::one()) }

  pub fn try_sub(&self, other: &Self) -> Result<Self> { self.try_add(&other.neg()) }

  pub fn scale_rational(&self, c: &BigRational) -> Self {
    let mut out = Self::zero(&self.model, self.r, self.s);
    for (k, a) in &self.terms {
      out.add_term(k.0.clone(), k.1.clone(), a.scale(c));
    }
    out
  }

  pub fn scale(&self, f: &ScalarExpr) -> Result<Self> {
    self.model.chart().check_same(f.chart())?;
    let mut out = Self::zero(&self.model, self.r, self.s);
    for (k, a) in &self.terms {
      out.add_term(k.0.clone(), k.1.clone(), a.try_mul(f)?);
    }
    Ok(out)
  }

  /// `d_H(a dy^J ⊗ dx^I) = Σ_i ∂a/∂x^i dy^J ⊗ dx^i ∧ dx^I`.
  pub fn d_h(&self) -> Self {
    let mut out = Self::zero(&self.model, self.r, self.s + 1);
    for ((j, i), a) in &self.terms {
      for &h in self.model.horizontal() {
        let Some((sign, idx)) = merge_sign(&[h as u8], i) else { continue };
        let da = a.partial_index(h);
        out.add_term(j.clone(), idx, sign_times(sign, da));
      }
    }
    out
  }

  /// The same operator computed as `(−1)^r` times the Frölicher–Nijenhuis
  /// derivation of the horizontal projection, keeping the `(r, s+1)` part.
  pub fn d_h_fn(&self) -> Result<Self> {
    let split = self.model.splitting()?;
    let w = self.to_form().fn_derivation(&split.h)?;
    let c = Self::component(&self.model, &w, self.r)?;
    Ok(if self.r % 2 == 1 { c.neg() } else { c })
  }

  /// The vertical Frölicher–Nijenhuis derivation, `(r+1, s)` part.
  pub fn d_v_fn(&self) -> Result<Self> {
    let split = self.model.splitting()?;
    let w = self.to_form().fn_derivation(&split.v)?;
    Self::component(&self.model, &w, self.r + 1)
  }

  /// A `d_H`-primitive of a closed form, built by integrating along the
  /// horizontal coordinates one at a time. `None` when some antiderivative
  /// is obstructed (a zero mode of a periodic coordinate) or the form is not
  /// closed.
  pub fn horizontal_homotopy(&self) -> Option<Self> {
    if self.s == 0 {
      return None;
    }
    let mut cur = self.clone();
    let mut prim = Self::zero(&self.model, self.r, self.s - 1);
    for &h in self.model.horizontal() {
      // cur = dx^h ∧ α + β; integrate α along x^h
      let mut a = Self::zero(&self.model, self.r, self.s - 1);
      for ((j, i), c) in &cur.terms {
        let Some(pos) = i.iter().position(|&k| k as usize == h) else { continue };
        let mut rest = i.clone();
        rest.remove(pos);
        let (anti, obstruction) = c.antiderivative(h);
        if !obstruction.is_zero() {
          return None;
        }
        a.add_term(j.clone(), rest, if pos % 2 == 0 { anti } else { -anti });
      }
      cur = cur.try_sub(&a.d_h()).ok()?;
      prim = prim.try_add(&a).ok()?;
    }
    (cur.is_zero() && prim.d_h() == *self).then_some(prim)
  }
}

/// Result of integrating a top horizontal form along the first horizontal coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalPrimitive {
  /// `Ω` of bidegree `(r, p−1)`.
  pub primitive: BigradedForm,
  /// The part of `ω` with no antiderivative: `ω − d_H Ω`.
  pub obstruction: BigradedForm,
}

impl HorizontalPrimitive {
  pub fn is_exact(&self) -> bool { self.obstruction.is_zero() }
}

/// Integrates `ω ∈ Φ^{r,p}` along `x^1`.
pub fn horizontal_primitive(w: &BigradedForm) -> Result<HorizontalPrimitive> {
  let model = w.model();
  let p = model.p();
  let (r, s) = w.bidegree();
  if s != p {
    return Err(Error::InvalidArgument(format!("expected a form of bidegree ({r},{p}), got ({r},{s})")));
  }
  if p == 0 {
    return Ok(HorizontalPrimitive { primitive: BigradedForm::zero(model, r, 0), obstruction: w.clone() });
  }
  let h = model.horizontal()[0];
  let mut prim = BigradedForm::zero(model, r, p - 1);
  let mut obstruction = BigradedForm::zero(model, r, p);
  for ((j, i), c) in w.terms() {
    let (anti, obs) = c.antiderivative(h);
    // x^1 is the smallest horizontal index, so it leads I
    prim.add_term(j.clone(), i[1..].into(), anti);
    obstruction.add_term(j.clone(), i.clone(), obs);
  }
  Ok(HorizontalPrimitive { primitive: prim, obstruction })
}

impl fmt::Display for BigradedForm {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let chart = self.model.chart();
    let parts = self
      .terms
      .iter()
      .map(|((j, i), a)| {
        let basis = match (j.is_empty(), i.is_empty()) {
          (true, _) => fmt_basis(chart, i),
          (false, true) => fmt_basis(chart, j),
          (false, false) => format!("{} ⊗ {}", fmt_basis(chart, j), fmt_basis(chart, i)),
        };
        fmt_scaled(a, &basis)
      })
      .collect();
    write!(f, "{}", join_signed(parts))
  }
}
