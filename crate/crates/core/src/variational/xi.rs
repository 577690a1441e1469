use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{BigradedForm, FoliatedModel};
use crate::cartan_calculus::{fmt_scaled, join_signed, merge_sign, DifferentialForm, Indices, VectorField};
use crate::error::{Error, Result};
use crate::group_action::SignConvention;
use crate::scalars::ScalarExpr;

/// A class in `Ξ^r = Φ^{r,p} / d_H Φ^{r,p−1}`, held by its canonical
/// representative `Σ_J a_J dy^J ⊗ dx^1∧…∧dx^p`.
///
/// The representative keeps only the zero-frequency part of every coefficient
/// in each horizontal coordinate; when some horizontal coordinate is flat every
/// class is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct XiClass {
  model: Arc<FoliatedModel>,
  r: usize,
  coeffs: BTreeMap<Indices, ScalarExpr>,
}

impl fmt::Debug for XiClass {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "Xi^{}[{self}]", self.r) }
}

fn reduce_coefficient(model: &FoliatedModel, a: &ScalarExpr) -> ScalarExpr {
  if model.has_flat_horizontal() {
    return ScalarExpr::zero(model.chart());
  }
  a.filter_terms(|m| model.horizontal().iter().all(|&h| m[h] == 0))
}

impl XiClass {
  pub fn zero(model: &Arc<FoliatedModel>, r: usize) -> Self { Self { model: model.clone(), r, coeffs: BTreeMap::new() } }

  /// The quotient map `q_r: Φ^{r,p} → Ξ^r`.
  pub fn project(w: &BigradedForm) -> Result<Self> {
    let model = w.model();
    let (r, s) = w.bidegree();
    if s != model.p() {
      return Err(Error::InvalidArgument(format!("q_r needs bidegree ({r},{}), got ({r},{s})", model.p())));
    }
    let mut out = Self::zero(model, r);
    for ((j, _), a) in w.terms() {
      out.add(j.clone(), reduce_coefficient(model, a));
    }
    Ok(out)
  }

  /// `q_r` applied to the `(r, p)` component of an ordinary form.
  pub fn project_form(model: &Arc<FoliatedModel>, w: &DifferentialForm, r: usize) -> Result<Self> {
    Self::project(&BigradedForm::component(model, w, r)?)
  }

  fn add(&mut self, j: Indices, a: ScalarExpr) {
    if a.is_zero() {
      return;
    }
    let e = self.coeffs.entry(j.clone()).or_insert_with(|| ScalarExpr::zero(a.chart()));
    *e = &*e + &a;
    if e.is_zero() {
      self.coeffs.remove(&j);
    }
  }

  pub fn model(&self) -> &Arc<FoliatedModel> { &self.model }

  pub fn degree(&self) -> usize { self.r }

  /// Coefficients `a_J` of the canonical representative.
  pub fn coefficients(&self) -> &BTreeMap<Indices, ScalarExpr> { &self.coeffs }

  pub fn coefficient(&self, j: &[u8]) -> ScalarExpr {
    self.coeffs.get(j).cloned().unwrap_or_else(|| ScalarExpr::zero(self.model.chart()))
  }

  pub fn is_zero(&self) -> bool { self.coeffs.is_empty() }

  pub fn representative(&self) -> BigradedForm {
    let mut out = BigradedForm::zero(&self.model, self.r, self.model.p());
    let top: Indices = self.model.horizontal().iter().map(|&h| h as u8).collect();
    for (j, a) in &self.coeffs {
      out.add_term(j.clone(), top.clone(), a.clone());
    }
    out
  }

  pub fn try_add(&self, other: &Self) -> Result<Self> {
    if self.r != other.r {
      return Err(Error::InvalidArgument(format!("cannot add classes of degrees {} and {}", self.r, other.r)));
    }
    let mut out = self.clone();
    for (j, a) in &other.coeffs {
      out.add(j.clone(), a.clone());
    }
    Ok(out)
  }

  pub fn scale_rational(&self, c: &BigRational) -> Self {
    let mut out = Self::zero(&self.model, self.r);
    for (j, a) in &self.coeffs {
      out.add(j.clone(), a.scale(c));
    }
    out
  }

  /// The contact part `Σ_J a_J dy^J` as an ordinary `r`-form.
  pub fn contact_form(&self) -> DifferentialForm {
    let mut out = DifferentialForm::zero(self.model.chart(), self.r);
    for (j, a) in &self.coeffs {
      out.add_term(j.clone(), a.clone());
    }
    out
  }

  /// `d_V` evaluated on the action fields:
  ///
  /// ```text
  /// d_Vτ(ξ_1..ξ_{r+1}) = q_0{Σ_i (−1)^{i+1} θ(ξ_i)[ω(..ξ̂_i..) μ]}
  ///   + q_0{Σ_{i<j} (−1)^{i+j} ω([ξ_i,ξ_j], ..ξ̂_i..ξ̂_j..) μ}
  /// ```
  ///
  /// with `τ = q_r(ω ⊗ μ)` and `μ` the horizontal volume, then reassembled
  /// with the Cartan coframe.
  pub fn d_v(&self) -> Result<Self> {
    let cochain = self.d_v_cochain()?;
    cochain.to_xi()
  }

  /// The `(r+1)`-cochain `g^{r+1} → Ξ^0` given by the defining formula of `d_V`.
  pub fn d_v_cochain(&self) -> Result<TwistedCochain> {
    let model = &self.model;
    let action = model.require_action()?;
    let q = action.algebra.dim();
    if self.r >= q {
      return Err(Error::InvalidArgument(format!("d_V on Ξ^{} with a {q}-dimensional algebra", self.r)));
    }
    let w = self.contact_form();
    let mu = model.horizontal_volume();
    let fields = &action.fields;
    let mut out = TwistedCochain::zero(model, self.r + 1);
    for set in subsets(q, self.r + 1) {
      let xs: Vec<&VectorField> = set.iter().map(|&i| &fields[i]).collect();
      let mut top = DifferentialForm::zero(model.chart(), model.p());
      for i in 0..xs.len() {
        let rest: Vec<&VectorField> = skip(&xs, &[i]);
        let val = mu.scale(&w.evaluate(&rest)?)?.lie_derivative(xs[i])?;
        top = if i % 2 == 0 { top.try_add(&val)? } else { top.try_sub(&val)? };
      }
      for i in 0..xs.len() {
        for j in i + 1..xs.len() {
          let bracket = xs[i].lie_bracket(xs[j])?;
          let mut args = vec![&bracket];
          args.extend(skip(&xs, &[i, j]));
          let val = mu.scale(&w.evaluate(&args)?)?;
          top = if (i + j) % 2 == 0 { top.try_add(&val)? } else { top.try_sub(&val)? };
        }
      }
      let class = XiClass::project_form(model, &top, 0)?;
      out.add(set.iter().map(|&i| i as u8).collect(), class.coefficient(&[]));
    }
    Ok(out)
  }

  /// The same operator through the vertical Frölicher–Nijenhuis derivation
  /// applied to the representative.
  pub fn d_v_fn(&self) -> Result<Self> { Self::project(&self.representative().d_v_fn()?) }

  /// The cochain `(e_{i_1},…,e_{i_r}) ↦ τ(Φ(e_{i_1}),…,Φ(e_{i_r}))`.
  pub fn to_cochain(&self) -> Result<TwistedCochain> {
    let action = self.model.require_action()?;
    let w = self.contact_form();
    let mut out = TwistedCochain::zero(&self.model, self.r);
    for set in subsets(action.algebra.dim(), self.r) {
      let xs: Vec<&VectorField> = set.iter().map(|&i| &action.fields[i]).collect();
      out.add(set.iter().map(|&i| i as u8).collect(), reduce_coefficient(&self.model, &w.evaluate(&xs)?));
    }
    Ok(out)
  }
}

/// The Euler operator `E = d_V ∘ q_0: Φ^{0,p} → Ξ^1`.
pub fn euler(mu: &BigradedForm) -> Result<XiClass> {
  if mu.bidegree().0 != 0 {
    return Err(Error::InvalidArgument("the Euler operator acts on forms of bidegree (0,p)".into()));
  }
  XiClass::project(mu)?.d_v()
}

impl fmt::Display for XiClass {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "[{}]", self.representative().to_form()) }
}

/// An element of `∧^k g* ⊗ Ξ^0`: `Σ_S e^S ⊗ q_0(f_S μ)` with `μ` the horizontal volume.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedCochain {
  model: Arc<FoliatedModel>,
  k: usize,
  terms: BTreeMap<Indices, ScalarExpr>,
}

impl fmt::Debug for TwistedCochain {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "Cochain^{}[{self}]", self.k) }
}

impl TwistedCochain {
  pub fn zero(model: &Arc<FoliatedModel>, k: usize) -> Self { Self { model: model.clone(), k, terms: BTreeMap::new() } }

  /// `e^S ⊗ q_0(f μ)`; `S` must be increasing.
  pub fn basis(model: &Arc<FoliatedModel>, set: &[usize], f: ScalarExpr) -> Self {
    let mut out = Self::zero(model, set.len());
    out.add(set.iter().map(|&i| i as u8).collect(), reduce_coefficient(model, &f));
    out
  }

  fn add(&mut self, s: Indices, a: ScalarExpr) {
    if a.is_zero() {
      return;
    }
    let e = self.terms.entry(s.clone()).or_insert_with(|| ScalarExpr::zero(a.chart()));
    *e = &*e + &a;
    if e.is_zero() {
      self.terms.remove(&s);
    }
  }

  pub fn degree(&self) -> usize { self.k }

  pub fn terms(&self) -> &BTreeMap<Indices, ScalarExpr> { &self.terms }

  pub fn is_zero(&self) -> bool { self.terms.is_empty() }

  pub fn value(&self, set: &[u8]) -> ScalarExpr {
    self.terms.get(set).cloned().unwrap_or_else(|| ScalarExpr::zero(self.model.chart()))
  }

  /// `∂(ω ⊗ q_0μ) = dω ⊗ q_0μ + (−1)^{deg ω} ω ∧ d_V(q_0μ)` with `dω` from
  /// the structure constants, `dω^k = Σ_{i<j} c^k_{ij} ω^i∧ω^j`, `c = −C`.
  pub fn twisted_d(&self) -> Result<Self> {
    let action = self.model.require_action()?;
    let g = &action.algebra;
    let q = g.dim();
    let mu = self.model.horizontal_volume();
    let mut out = Self::zero(&self.model, self.k + 1);
    for (set, f) in &self.terms {
      // dω ⊗ q_0μ
      for (pos, &k) in set.iter().enumerate() {
        for i in 0..q {
          for j in i + 1..q {
            let c = structure_coefficient(g, i, j, k as usize, SignConvention::Negated);
            if c.is_zero() {
              continue;
            }
            let mut slots: Vec<u8> = set.to_vec();
            slots.splice(pos..=pos, [i as u8, j as u8]);
            if let Some((sign, idx)) = sorted_distinct(&slots) {
              let mut t = f.scale(&c);
              if (pos % 2 == 1) != (sign < 0) {
                t = -t;
              }
              out.add(idx, t);
            }
          }
        }
      }
      // (−1)^k ω^S ∧ ω^i ⊗ q_0(θ(ξ_i)(f μ))
      for i in 0..q {
        let Some((sign, idx)) = merge_sign(set, &[i as u8]) else { continue };
        let lie = mu.scale(f)?.lie_derivative(&action.fields[i])?;
        let val = XiClass::project_form(&self.model, &lie, 0)?.coefficient(&[]);
        let flip = (sign < 0) != (self.k % 2 == 1);
        out.add(idx, if flip { -val } else { val });
      }
    }
    Ok(out)
  }

  /// The class `Σ_S f_S ω^S ⊗ μ` in `Ξ^k`, with `ω^i` the Cartan coframe.
  pub fn to_xi(&self) -> Result<XiClass> {
    let cartan = self.model.cartan_basis().ok_or(Error::NoAction)?;
    let mut out = XiClass::zero(&self.model, self.k);
    for (set, f) in &self.terms {
      let mut w = DifferentialForm::scalar(f.clone());
      for &i in set {
        w = w.wedge(&cartan.forms[i as usize])?;
      }
      out = out.try_add(&XiClass::project_form(&self.model, &w.wedge(&self.model.horizontal_volume())?, self.k)?)?;
    }
    Ok(out)
  }
}

impl fmt::Display for TwistedCochain {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let names = self.model.action().map(|a| a.algebra.names().to_vec()).unwrap_or_default();
    let parts = self
      .terms
      .iter()
      .map(|(s, a)| {
        let basis: Vec<String> =
          s.iter().map(|&i| format!("{}*", names.get(i as usize).cloned().unwrap_or_else(|| format!("e{i}")))).collect();
        let basis = if basis.is_empty() { "1".to_string() } else { basis.join("∧") };
        fmt_scaled(a, &basis)
      })
      .collect();
    write!(f, "{}", join_signed(parts))
  }
}

/// `c^k_{ij}` in the structure equation for the chosen convention.
pub(crate) fn structure_coefficient(
  g: &crate::group_action::LieAlgebraSpec,
  i: usize,
  j: usize,
  k: usize,
  convention: SignConvention,
) -> BigRational {
  let c = g.constant(i, j, k).clone();
  match convention {
    SignConvention::Negated => -c,
    SignConvention::Direct => c,
  }
}

/// Sorts `slots`, returning the permutation sign, or `None` on a repeated index.
pub(crate) fn sorted_distinct(slots: &[u8]) -> Option<(i8, Indices)> {
  let (sign, v) = crate::cartan_calculus::sort_sign(slots);
  (!v.windows(2).any(|w| w[0] == w[1])).then_some((sign, v))
}

/// Increasing `k`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
  fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
      out.push(cur.clone());
      return;
    }
    for i in start..n {
      cur.push(i);
      go(i + 1, n, k, cur, out);
      cur.pop();
    }
  }
  let mut out = Vec::new();
  if k <= n {
    go(0, n, k, &mut Vec::new(), &mut out);
  }
  out
}

fn skip<'a>(xs: &[&'a VectorField], drop: &[usize]) -> Vec<&'a VectorField> {
  xs.iter().enumerate().filter(|(k, _)| !drop.contains(k)).map(|(_, x)| *x).collect()
}
