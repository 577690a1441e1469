//! Pfaffian systems, their annihilating distributions, and complementary
//! splittings of the tangent bundle.

pub mod minors;

use std::fmt;
use std::sync::Arc;

use crate::cartan_calculus::{DifferentialForm, VectorField, VectorValuedOneForm};
use crate::error::{Error, Result};
use crate::scalars::{ChartModel, ScalarExpr};
use minors::{generic_rank, inverse, kernel, SMatrix};

/// A system of pointwise independent 1-forms `𝒮 = <ω^1, ..., ω^q>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PfaffianSystem {
  chart: Arc<ChartModel>,
  generators: Vec<DifferentialForm>,
}

/// A distribution spanned by generically independent vector fields.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution {
  chart: Arc<ChartModel>,
  fields: Vec<VectorField>,
  /// The pivot minor of the spanning matrix; the fields are independent
  /// wherever it does not vanish.
  locus: ScalarExpr,
}

impl PfaffianSystem {
  pub fn new(chart: &Arc<ChartModel>, generators: Vec<DifferentialForm>) -> Result<Self> {
    for g in &generators {
      chart.check_same(g.chart())?;
      if g.degree() != 1 {
        return Err(Error::DegenerateSystem(format!("generator `{g}` is not a 1-form")));
      }
    }
    let s = Self { chart: chart.clone(), generators };
    let (rank, _) = generic_rank(chart, &s.coefficient_matrix(), chart.dim());
    if rank < s.generators.len() {
      return Err(Error::DegenerateSystem(format!(
        "{} generators have generic rank {rank}",
        s.generators.len()
      )));
    }
    Ok(s)
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn generators(&self) -> &[DifferentialForm] { &self.generators }

  /// `q`, the number of generators.
  pub fn rank(&self) -> usize { self.generators.len() }

  /// `p = n − q`, the rank of the annihilator.
  pub fn leaf_dimension(&self) -> usize { self.chart.dim() - self.rank() }

  /// Rows are generators, columns coordinate slots.
  pub fn coefficient_matrix(&self) -> SMatrix { self.generators.iter().map(DifferentialForm::one_form_row).collect() }

  /// `Σ = 𝒮^⊥`, the fields annihilated by every generator.
  pub fn annihilator(&self) -> Distribution {
    let m = self.coefficient_matrix();
    let n = self.chart.dim();
    let fields = kernel(&self.chart, &m, n)
      .into_iter()
      .map(|v| VectorField::new(&self.chart, v).expect("kernel vectors have chart length"))
      .collect::<Vec<_>>();
    let locus = if m.is_empty() { ScalarExpr::one(&self.chart) } else { generic_rank(&self.chart, &m, n).1.det };
    Distribution { chart: self.chart.clone(), fields, locus }
  }

  /// The top wedge `ω^1 ∧ ... ∧ ω^q` (the unit function when `q = 0`).
  pub fn top_wedge(&self) -> DifferentialForm {
    let mut w = DifferentialForm::scalar(ScalarExpr::one(&self.chart));
    for g in &self.generators {
      w = w.wedge(g).expect("same chart");
    }
    w
  }

  /// Frobenius: every generator satisfies `dω ∧ ω^1 ∧ ... ∧ ω^q = 0`.
  pub fn is_integrable(&self) -> bool { self.integrability_witness().is_none() }

  /// The first generator violating the exterior criterion, with the offending form.
  pub fn integrability_witness(&self) -> Option<(usize, DifferentialForm)> {
    let top = self.top_wedge();
    self.generators.iter().enumerate().find_map(|(i, g)| {
      let w = g.d().wedge(&top).expect("same chart");
      (!w.is_zero()).then_some((i, w))
    })
  }

  /// `i(η)ω = 0` and `i(η)dω = 0` for every `η` spanning `Σ`.
  pub fn is_invariant_form(&self, w: &DifferentialForm) -> Result<bool> {
    self.chart.check_same(w.chart())?;
    let dw = w.d();
    for eta in self.annihilator().fields() {
      if !w.interior(eta)?.is_zero() || !dw.interior(eta)?.is_zero() {
        return Ok(false);
      }
    }
    Ok(true)
  }

  /// `df` annihilates `Σ`, i.e. lies in the span of the generators.
  pub fn is_first_integral(&self, f: &ScalarExpr) -> Result<bool> {
    self.chart.check_same(f.chart())?;
    Ok(self.annihilator().fields().iter().all(|eta| eta.apply(f).is_zero()))
  }

  /// Whether the 1-form `w` lies in the span of the generators over the fraction field.
  pub fn contains(&self, w: &DifferentialForm) -> Result<bool> {
    self.chart.check_same(w.chart())?;
    if w.degree() != 1 {
      return Err(Error::InvalidArgument("span membership is tested for 1-forms".into()));
    }
    for eta in self.annihilator().fields() {
      if !w.pair(eta)?.is_zero() {
        return Ok(false);
      }
    }
    Ok(true)
  }

  /// `θ(ξ)ω` lies in the generator span for every generator `ω`.
  pub fn is_symmetry(&self, xi: &VectorField) -> Result<bool> {
    for g in &self.generators {
      if !self.contains(&g.lie_derivative(xi)?)? {
        return Ok(false);
      }
    }
    Ok(true)
  }

  /// Fields `η_i` spanning `Σ` with `<η_i, dx^{c_j}> = δ_i^j` for the chosen coordinates.
  #[allow(clippy::needless_range_loop)]
  pub fn dual_horizontal_basis(&self, coords: &[&str]) -> Result<HorizontalBasis> {
    let p = self.leaf_dimension();
    if coords.len() != p {
      return Err(Error::InvalidArgument(format!("need {p} coordinates, got {}", coords.len())));
    }
    let idx = coords.iter().map(|c| self.chart.index_of(c)).collect::<Result<Vec<_>>>()?;
    let span = self.annihilator();
    // pairing matrix M_{ji} = <F_i, dx^{c_j}>
    let m: SMatrix =
      idx.iter().map(|&j| span.fields().iter().map(|f| f.component(j).clone()).collect()).collect();
    let what = format!("dual horizontal basis for coordinates {}", coords.join(", "));
    let det = minors::det(&self.chart, &m);
    if det.is_zero() {
      return Err(Error::NotTransverse(format!("the differentials of {} are dependent on Σ", coords.join(", "))));
    }
    let inv = inverse(&self.chart, &m, &what)?;
    let mut fields = Vec::with_capacity(p);
    for i in 0..p {
      let mut acc = VectorField::zero(&self.chart);
      for (k, f) in span.fields().iter().enumerate() {
        acc = acc.try_add(&f.scale(&inv[k][i])?)?;
      }
      fields.push(acc);
    }
    let mut commuting = true;
    'outer: for i in 0..p {
      for j in i + 1..p {
        if !fields[i].lie_bracket(&fields[j])?.is_zero() {
          commuting = false;
          break 'outer;
        }
      }
    }
    Ok(HorizontalBasis { fields, commuting })
  }
}

impl fmt::Display for PfaffianSystem {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let g: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
    write!(f, "<{}>", g.join(", "))
  }
}

/// Result of [`PfaffianSystem::dual_horizontal_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalBasis {
  pub fields: Vec<VectorField>,
  /// Whether all pairwise brackets vanish (guaranteed when the system is integrable).
  pub commuting: bool,
}

impl Distribution {
  pub fn new(chart: &Arc<ChartModel>, fields: Vec<VectorField>) -> Result<Self> {
    for f in &fields {
      chart.check_same(f.chart())?;
    }
    let m = field_matrix(chart, &fields);
    let (rank, piv) = generic_rank(chart, &m, fields.len());
    if rank < fields.len() {
      return Err(Error::DegenerateSystem(format!("{} spanning fields have generic rank {rank}", fields.len())));
    }
    Ok(Self { chart: chart.clone(), fields, locus: piv.det })
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn fields(&self) -> &[VectorField] { &self.fields }

  pub fn rank(&self) -> usize { self.fields.len() }

  /// Polynomial whose vanishing set contains every point where the spanning fields degenerate.
  pub fn degeneracy_locus(&self) -> &ScalarExpr { &self.locus }

  /// Whether the span is closed under brackets (checked through the annihilator).
  pub fn is_involutive(&self) -> Result<bool> {
    let ann = self.annihilating_forms();
    for i in 0..self.fields.len() {
      for j in i + 1..self.fields.len() {
        let b = self.fields[i].lie_bracket(&self.fields[j])?;
        for w in &ann {
          if !w.pair(&b)?.is_zero() {
            return Ok(false);
          }
        }
      }
    }
    Ok(true)
  }

  /// 1-forms spanning the annihilator of the distribution.
  pub fn annihilating_forms(&self) -> Vec<DifferentialForm> {
    let n = self.chart.dim();
    // rows = fields, columns = slots: kernel vectors are the coefficient rows of the forms
    let m: SMatrix = self.fields.iter().map(|f| f.components().to_vec()).collect();
    kernel(&self.chart, &m, n).into_iter().map(|row| DifferentialForm::from_row(&self.chart, &row)).collect()
  }
}

/// Columns are the fields.
pub(crate) fn field_matrix(chart: &Arc<ChartModel>, fields: &[VectorField]) -> SMatrix {
  (0..chart.dim()).map(|i| fields.iter().map(|f| f.component(i).clone()).collect()).collect()
}

/// A decomposition `TM = Σ_V ⊕ Σ_H` with its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
  pub sigma_v: Vec<VectorField>,
  pub sigma_h: Vec<VectorField>,
  pub v: VectorValuedOneForm,
  pub h: VectorValuedOneForm,
  /// Dual coframe: the first `|Σ_V|` forms pair to δ with `Σ_V` and kill `Σ_H`, the rest vice versa.
  pub coframe: Vec<DifferentialForm>,
}

/// Builds the projections of a complementary pair of distributions.
pub fn make_splitting(chart: &Arc<ChartModel>, sigma_v: &[VectorField], sigma_h: &[VectorField]) -> Result<Splitting> {
  let n = chart.dim();
  if sigma_v.len() + sigma_h.len() != n {
    return Err(Error::NotComplementary(format!(
      "ranks {} + {} do not add up to {n}",
      sigma_v.len(),
      sigma_h.len()
    )));
  }
  let all: Vec<VectorField> = sigma_v.iter().chain(sigma_h).cloned().collect();
  for f in &all {
    chart.check_same(f.chart())?;
  }
  let p = field_matrix(chart, &all);
  let pinv = inverse(chart, &p, "splitting projections")?;
  let coframe: Vec<DifferentialForm> = pinv.iter().map(|row| DifferentialForm::from_row(chart, row)).collect();
  let mut v = VectorValuedOneForm::zero(chart);
  let mut h = VectorValuedOneForm::zero(chart);
  for (a, f) in all.iter().enumerate() {
    let piece = VectorValuedOneForm::outer(f, &coframe[a])?;
    if a < sigma_v.len() {
      v = v.try_add(&piece)?;
    } else {
      h = h.try_add(&piece)?;
    }
  }
  Ok(Splitting { sigma_v: sigma_v.to_vec(), sigma_h: sigma_h.to_vec(), v, h, coframe })
}

impl Splitting {
  /// `V + H = Id`, `V² = V`, `H² = H`, `VH = HV = 0`.
  pub fn projection_identities_hold(&self) -> Result<bool> {
    let id = VectorValuedOneForm::identity(self.v.chart());
    Ok(self.v.try_add(&self.h)? == id
      && self.v.compose(&self.v)? == self.v
      && self.h.compose(&self.h)? == self.h
      && self.v.compose(&self.h)?.is_zero()
      && self.h.compose(&self.v)?.is_zero())
  }
}

#[cfg(test)]
mod tests;
