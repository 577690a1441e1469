use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{BigradedForm, FoliatedModel};
use crate::cartan_calculus::{DifferentialForm, VectorField};
use crate::error::{Error, Result};
use crate::pfaffian::{make_splitting, Distribution};
use crate::scalars::{ChartModel, ScalarExpr};

/// One cancellation condition for `dω` to be of pure type `(ℓ+1, 0)`: the
/// component of `dω` of type `slot` must vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotCondition {
  /// `(r, s)` with `r + s = ℓ + 1`, `s ≥ 1`.
  pub slot: (usize, usize),
  pub holds: bool,
  /// The offending component, printed as a form, when the condition fails.
  pub residue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeInvariance {
  pub degree: usize,
  pub conditions: Vec<SlotCondition>,
  /// True when every condition holds, so that `dω` has type `(ℓ+1, 0)`.
  pub relatively_invariant: bool,
  /// Independent check that `dω` is an invariant form of the system.
  pub d_invariant: bool,
}

/// Checks `(−1)^r d_H ω^{r,s−1} + d_V ω^{r−1,s} = 0` for every slot `(r, s)`
/// of `dω` with `s ≥ 1`, where `d_H` is the foliated-chart operator and `d_V`
/// the vertical Frölicher–Nijenhuis derivation.
pub fn relative_invariance_check(w: &DifferentialForm, model: &Arc<FoliatedModel>) -> Result<RelativeInvariance> {
  let l = w.degree();
  let parts = BigradedForm::decompose(model, w)?;
  let mut conditions = Vec::new();
  for s in 1..=l + 1 {
    let r = l + 1 - s;
    // (−1)^r d_H ω^{r, s−1}
    let mut total = BigradedForm::zero(model, r, s);
    if r <= l {
      let h = parts[r].d_h();
      total = total.try_add(&if r % 2 == 1 { h.neg() } else { h })?;
    }
    if r >= 1 {
      total = total.try_add(&parts[r - 1].d_v_fn()?)?;
    }
    let holds = total.is_zero();
    conditions.push(SlotCondition { slot: (r, s), holds, residue: (!holds).then(|| total.to_form().to_string()) });
  }
  let relatively_invariant = conditions.iter().all(|c| c.holds);
  let d_invariant = model.system().is_invariant_form(&w.d())?;
  Ok(RelativeInvariance { degree: l, conditions, relatively_invariant, d_invariant })
}

/// Outcome of the double-complex test for a splitting `TM = Σ_V ⊕ Σ_H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Report {
  pub v_integrable: bool,
  pub h_integrable: bool,
  /// `d_V² = 0` on every probe form.
  pub d_v_squared_zero: bool,
  /// `d_H² = 0` on every probe form.
  pub d_h_squared_zero: bool,
  /// A probe form with `d_V² ≠ 0` or `d_H² ≠ 0`, and the offending image.
  pub witness: Option<(DifferentialForm, DifferentialForm)>,
}

/// The probe forms: coordinates, their pairwise products, and differentials.
fn probes(chart: &Arc<ChartModel>) -> Vec<DifferentialForm> {
  let n = chart.dim();
  // x^i for flat coordinates, cos(x^i) for periodic ones
  let coord = |i: usize| ScalarExpr::monomial(chart, BigRational::one(), &[(i, 1)]);
  let mut out = Vec::new();
  for i in 0..n {
    out.push(DifferentialForm::scalar(coord(i)));
  }
  for i in 0..n {
    for j in i..n {
      out.push(DifferentialForm::scalar(&coord(i) * &coord(j)));
    }
  }
  for i in 0..n {
    for j in 0..n {
      out.push(DifferentialForm::basis(coord(j), &[i]));
    }
  }
  out
}

/// Checks `d_V² = 0` and `d_H² = 0` (Frölicher–Nijenhuis derivations of the
/// two projections) on probe forms plus `extra`, and reports integrability of
/// both distributions.
pub fn theorem2_check(
  sigma_v: &[VectorField],
  sigma_h: &[VectorField],
  extra: &[DifferentialForm],
) -> Result<Theorem2Report> {
  let chart = sigma_v
    .first()
    .or(sigma_h.first())
    .map(|f| f.chart().clone())
    .ok_or_else(|| Error::InvalidArgument("empty splitting".into()))?;
  let split = make_splitting(&chart, sigma_v, sigma_h)?;
  let involutive = |fields: &[VectorField]| -> Result<bool> {
    if fields.is_empty() {
      return Ok(true);
    }
    Distribution::new(&chart, fields.to_vec())?.is_involutive()
  };
  let v_integrable = involutive(sigma_v)?;
  let h_integrable = involutive(sigma_h)?;
  let mut d_v_squared_zero = true;
  let mut d_h_squared_zero = true;
  let mut witness = None;
  for w in probes(&chart).iter().chain(extra) {
    let vv = w.fn_derivation(&split.v)?.fn_derivation(&split.v)?;
    let hh = w.fn_derivation(&split.h)?.fn_derivation(&split.h)?;
    if !vv.is_zero() {
      d_v_squared_zero = false;
      witness.get_or_insert((w.clone(), vv));
    }
    if !hh.is_zero() {
      d_h_squared_zero = false;
      witness.get_or_insert((w.clone(), hh));
    }
  }
  Ok(Theorem2Report { v_integrable, h_integrable, d_v_squared_zero, d_h_squared_zero, witness })
}
