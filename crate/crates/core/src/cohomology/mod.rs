//! Truncated cochain complexes, their cohomology, the Chevalley–Eilenberg
//! complex of a Lie algebra with values in a finite-dimensional module, and the
//! comparison between vertical variational and Lie algebra cohomology.

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan_calculus::DifferentialForm;
use crate::error::{Error, Result};
use crate::exact_linalg::{cohomology_dim, RationalMatrix, Subspace};
use crate::group_action::{LieAlgebraSpec, SignConvention};
use crate::variational::{
  index_weight, mono_weight, sorted_distinct, structure_coefficient, subsets, FoliatedModel, Truncation, XiClass,
  XiSpace,
};

/// A finite cochain complex `C^start → C^{start+1} → ⋯` of rational vector spaces.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
  pub label: String,
  pub start: usize,
  pub dims: Vec<usize>,
  /// `maps[i]: C^{start+i} → C^{start+i+1}`, a `dims[i+1] × dims[i]` matrix.
  pub maps: Vec<RationalMatrix>,
  /// Basis elements as forms, when the cochains are forms.
  pub elements: Option<Vec<Vec<DifferentialForm>>>,
  pub truncation: Option<Truncation>,
}

impl TruncatedComplex {
  /// Shapes agree and consecutive maps compose to zero.
  pub fn check(&self) -> Result<()> {
    if self.maps.len() + 1 != self.dims.len() && !(self.dims.is_empty() && self.maps.is_empty()) {
      return Err(Error::InvalidArgument(format!("{} maps for {} spaces", self.maps.len(), self.dims.len())));
    }
    for (i, m) in self.maps.iter().enumerate() {
      if m.cols() != self.dims[i] || m.rows() != self.dims[i + 1] {
        return Err(Error::InvalidArgument(format!(
          "{}: map {i} is {}x{}, expected {}x{}",
          self.label,
          m.rows(),
          m.cols(),
          self.dims[i + 1],
          self.dims[i]
        )));
      }
    }
    for (i, pair) in self.maps.windows(2).enumerate() {
      if !pair[1].mul(&pair[0])?.is_zero() {
        return Err(Error::ComplexViolation(format!(
          "{}: d∘d ≠ 0 at degree {}",
          self.label,
          self.start + i + 1
        )));
      }
    }
    Ok(())
  }

  fn incoming(&self, i: usize) -> RationalMatrix {
    if i == 0 {
      RationalMatrix::zeros(self.dims[0], 0)
    } else {
      self.maps[i - 1].clone()
    }
  }

  fn outgoing(&self, i: usize) -> RationalMatrix {
    self.maps.get(i).cloned().unwrap_or_else(|| RationalMatrix::zeros(0, self.dims[i]))
  }

  /// `dim H^k` for every degree, computed in parallel.
  pub fn cohomology(&self) -> Result<Vec<usize>> {
    self.check()?;
    (0..self.dims.len()).into_par_iter().map(|i| cohomology_dim(&self.incoming(i), &self.outgoing(i))).collect()
  }

  /// Cocycles spanning a complement of the coboundaries at `degree`.
  pub fn witnesses(&self, degree: usize) -> Result<Vec<Vec<BigRational>>> {
    let i = degree.checked_sub(self.start).filter(|&i| i < self.dims.len()).ok_or_else(|| {
      Error::InvalidArgument(format!("{} has no degree {degree}", self.label))
    })?;
    let image = self.incoming(i).transpose();
    let mut span: Vec<Vec<BigRational>> =
      (0..image.rows()).map(|r| (0..self.dims[i]).map(|c| image.get(r, c)).collect()).collect();
    let mut sub = Subspace::span(self.dims[i], &span);
    let mut out = Vec::new();
    for z in self.outgoing(i).kernel_basis() {
      if !sub.contains(&z) {
        span.push(z.clone());
        sub = Subspace::span(self.dims[i], &span);
        out.push(z);
      }
    }
    Ok(out)
  }

  /// The report restricted to degrees `≥ from`.
  pub fn report(&self, from: usize, with_witnesses: bool) -> Result<CohomologyReport> {
    let dims = self.cohomology()?;
    let mut out = CohomologyReport {
      label: self.label.clone(),
      dims: BTreeMap::new(),
      truncation: self.truncation,
      witnesses: BTreeMap::new(),
    };
    for (i, &h) in dims.iter().enumerate() {
      let k = self.start + i;
      if k < from {
        continue;
      }
      out.dims.insert(k, h);
      if with_witnesses && h > 0 {
        if let Some(elements) = &self.elements {
          let forms = self
            .witnesses(k)?
            .into_iter()
            .map(|v| combine(&elements[i], &v).map(|w| w.to_string()))
            .collect::<Result<Vec<_>>>()?;
          out.witnesses.insert(k, forms);
        }
      }
    }
    Ok(out)
  }
}

fn combine(basis: &[DifferentialForm], v: &[BigRational]) -> Result<DifferentialForm> {
  let mut acc = DifferentialForm::zero(basis[0].chart(), basis[0].degree());
  for (b, c) in basis.iter().zip(v) {
    if !c.is_zero() {
      acc = acc.try_add(&b.scale_rational(c))?;
    }
  }
  Ok(acc)
}

/// Dimensions of a truncated complex, per degree, with optional witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
  pub label: String,
  pub dims: BTreeMap<usize, usize>,
  pub truncation: Option<Truncation>,
  /// Representative cocycles printed in the DSL syntax.
  pub witnesses: BTreeMap<usize, Vec<String>>,
}

/// Weights making a truncated Chevalley–Eilenberg complex: `e^S ⊗ v_a` is kept
/// when `Σ_{i∈S} generator_weights[i] + vector_weights[a] ≤ max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
  pub vector_weights: Vec<u32>,
  pub generator_weights: Vec<u32>,
  pub max: u32,
}

/// A representation `ρ: g → gl(V)` on `V = ℚ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEModule {
  pub algebra: LieAlgebraSpec,
  pub dim: usize,
  /// `rho[i]` is the `m × m` matrix of `ρ(e_i)`.
  pub rho: Vec<RationalMatrix>,
  pub grading: Option<Grading>,
}

impl CEModule {
  pub fn new(algebra: LieAlgebraSpec, dim: usize, rho: Vec<RationalMatrix>) -> Result<Self> {
    let m = Self { algebra, dim, rho, grading: None };
    m.check_shapes()?;
    Ok(m)
  }

  /// The trivial module `ℚ^m` (all `ρ(e_i) = 0`).
  pub fn trivial(algebra: LieAlgebraSpec, dim: usize) -> Self {
    let rho = vec![RationalMatrix::zeros(dim, dim); algebra.dim()];
    Self { algebra, dim, rho, grading: None }
  }

  pub fn with_grading(mut self, grading: Grading) -> Result<Self> {
    if grading.vector_weights.len() != self.dim || grading.generator_weights.len() != self.algebra.dim() {
      return Err(Error::InvalidModule("grading has the wrong number of weights".into()));
    }
    self.grading = Some(grading);
    Ok(self)
  }

  fn check_shapes(&self) -> Result<()> {
    if self.rho.len() != self.algebra.dim() {
      return Err(Error::InvalidModule(format!(
        "{} matrices for a {}-dimensional algebra",
        self.rho.len(),
        self.algebra.dim()
      )));
    }
    if self.rho.iter().any(|r| r.rows() != self.dim || r.cols() != self.dim) {
      return Err(Error::InvalidModule(format!("representation matrices must be {0}x{0}", self.dim)));
    }
    Ok(())
  }

  /// The first pair `(i, j)` with `ρ([e_i,e_j]) ≠ [ρ(e_i), ρ(e_j)]`, if any.
  pub fn representation_failure(&self) -> Result<Option<(usize, usize)>> {
    self.check_shapes()?;
    let q = self.algebra.dim();
    for i in 0..q {
      for j in i + 1..q {
        let comm = sub(&self.rho[i].mul(&self.rho[j])?, &self.rho[j].mul(&self.rho[i])?);
        let mut lhs = RationalMatrix::zeros(self.dim, self.dim);
        for k in 0..q {
          let c = self.algebra.constant(i, j, k);
          if !c.is_zero() {
            lhs = add(&lhs, &scale(&self.rho[k], c));
          }
        }
        if lhs != comm {
          return Ok(Some((i, j)));
        }
      }
    }
    Ok(None)
  }

  /// `ρ(e_i) + c·Id`: a perturbed copy, used as a negative control.
  pub fn shifted(&self, i: usize, c: BigRational) -> Self {
    let mut out = self.clone();
    out.rho[i] = add(&out.rho[i], &scale(&RationalMatrix::identity(self.dim), &c));
    out
  }

  /// Cochain basis `(S, a)` of degree `k`, honoring the grading.
  pub fn cochain_basis(&self, k: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for s in subsets(self.algebra.dim(), k) {
      for a in 0..self.dim {
        if let Some(g) = &self.grading {
          let w: u32 = s.iter().map(|&i| g.generator_weights[i]).sum::<u32>() + g.vector_weights[a];
          if w > g.max {
            continue;
          }
        }
        out.push((s.clone(), a));
      }
    }
    out
  }
}

fn add(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
  let mut out = a.clone();
  for r in 0..b.rows() {
    for (&c, v) in b.row(r) {
      out.add_to(r, c, v);
    }
  }
  out
}

fn scale(a: &RationalMatrix, c: &BigRational) -> RationalMatrix {
  let mut out = RationalMatrix::zeros(a.rows(), a.cols());
  for r in 0..a.rows() {
    for (&k, v) in a.row(r) {
      out.set(r, k, v * c);
    }
  }
  out
}

fn sub(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix { add(a, &scale(b, &-BigRational::from_integer(1.into()))) }

/// The Chevalley–Eilenberg differential `C^k → C^{k+1}` on `∧^k g* ⊗ V`:
///
/// `d(e^S ⊗ v) = d_g e^S ⊗ v + Σ_i e^i ∧ e^S ⊗ ρ(e_i)v`, `d_g e^k = −Σ_{i<j} C^k_{ij} e^i∧e^j`.
pub fn ce_differential(m: &CEModule, k: usize) -> Result<RationalMatrix> {
  if let Some((i, j)) = m.representation_failure()? {
    return Err(Error::InvalidModule(format!(
      "ρ([{0}, {1}]) ≠ [ρ({0}), ρ({1})]",
      m.algebra.names()[i],
      m.algebra.names()[j]
    )));
  }
  let src = m.cochain_basis(k);
  let dst = m.cochain_basis(k + 1);
  let index: BTreeMap<(Vec<usize>, usize), usize> = dst.iter().cloned().enumerate().map(|(n, b)| (b, n)).collect();
  let q = m.algebra.dim();
  let mut out = RationalMatrix::zeros(dst.len(), src.len());
  let mut put = |set: &[u8], a: usize, col: usize, v: BigRational| -> Result<()> {
    let key = (set.iter().map(|&i| i as usize).collect::<Vec<_>>(), a);
    match index.get(&key) {
      Some(&row) => {
        out.add_to(row, col, &v);
        Ok(())
      },
      None => Err(Error::TruncationNotClosed(format!(
        "the Chevalley–Eilenberg differential leaves the graded cochains at e^{:?} ⊗ v{}",
        key.0, a
      ))),
    }
  };
  for (col, (set, a)) in src.iter().enumerate() {
    let set8: Vec<u8> = set.iter().map(|&i| i as u8).collect();
    // d_g e^S
    for (pos, &kk) in set.iter().enumerate() {
      for i in 0..q {
        for j in i + 1..q {
          let c = structure_coefficient(&m.algebra, i, j, kk, SignConvention::Negated);
          if c.is_zero() {
            continue;
          }
          let mut slots = set8.clone();
          slots.splice(pos..=pos, [i as u8, j as u8]);
          if let Some((sign, idx)) = sorted_distinct(&slots) {
            let neg = (pos % 2 == 1) != (sign < 0);
            put(&idx, *a, col, if neg { -c } else { c })?;
          }
        }
      }
    }
    // e^i ∧ e^S ⊗ ρ(e_i) v_a
    for i in 0..q {
      let mut slots = vec![i as u8];
      slots.extend(&set8);
      let Some((sign, idx)) = sorted_distinct(&slots) else { continue };
      for b in 0..m.dim {
        let v = m.rho[i].get(b, *a);
        if v.is_zero() {
          continue;
        }
        put(&idx, b, col, if sign < 0 { -v } else { v })?;
      }
    }
  }
  Ok(out)
}

/// The full Chevalley–Eilenberg complex `C^0 → ⋯ → C^{dim g}`.
pub fn ce_complex(m: &CEModule) -> Result<TruncatedComplex> {
  let q = m.algebra.dim();
  let maps = (0..q).into_par_iter().map(|k| ce_differential(m, k)).collect::<Result<Vec<_>>>()?;
  Ok(TruncatedComplex {
    label: "chevalley-eilenberg".into(),
    start: 0,
    dims: (0..=q).map(|k| m.cochain_basis(k).len()).collect(),
    maps,
    elements: None,
    truncation: None,
  })
}

/// `Ξ^0` truncated, as a module over `g` through `ρ(e_i)μ = q_0(θ(Φ(e_i))μ)`.
///
/// The grading gives each generator the weight of its Cartan form, so the
/// graded cochains match the truncated `Ξ^k`.
pub fn xi0_module(model: &Arc<FoliatedModel>, t: Truncation) -> Result<CEModule> {
  let action = model.require_action()?;
  let space = XiSpace::new(model, 0, t);
  let mu = model.horizontal_volume();
  let mut rho = Vec::new();
  for xi in &action.fields {
    let mut m = RationalMatrix::zeros(space.dim(), space.dim());
    for a in 0..space.dim() {
      let f = space.element(a).coefficient(&[]);
      let lie = mu.scale(&f)?.lie_derivative(xi)?;
      let image = XiClass::project_form(model, &lie, 0)?;
      for (b, v) in space.coordinates(&image)?.into_iter().enumerate() {
        if !v.is_zero() {
          m.set(b, a, v);
        }
      }
    }
    rho.push(m);
  }
  let generator_weights = generator_weights(model)?;
  let chart = model.chart();
  let horizontal: Vec<u8> = model.horizontal().iter().map(|&h| h as u8).collect();
  let base = index_weight(chart, &horizontal);
  let grading = Grading {
    vector_weights: (0..space.dim()).map(|a| space.coefficient_weight(a)).collect(),
    generator_weights,
    max: t.degree.saturating_sub(base),
  };
  CEModule::new(action.algebra.clone(), space.dim(), rho)?.with_grading(grading)
}

/// The weight of each Cartan form, which must be homogeneous and polynomial.
fn generator_weights(model: &FoliatedModel) -> Result<Vec<u32>> {
  let cartan = model.cartan_basis().ok_or(Error::NoAction)?;
  let chart = model.chart();
  cartan
    .forms
    .iter()
    .map(|w| {
      let mut weight = None;
      for (idx, a) in w.terms() {
        if a.has_denominator() {
          return Err(Error::TruncationNotClosed(format!("Cartan form `{w}` has a denominator")));
        }
        for (m, _) in a.terms() {
          let x = mono_weight(chart, m) + index_weight(chart, idx);
          if *weight.get_or_insert(x) != x {
            return Err(Error::TruncationMismatch(format!("Cartan form `{w}` is not homogeneous")));
          }
        }
      }
      Ok(weight.unwrap_or(0))
    })
    .collect()
}

/// The truncated complex `Ξ^0 → Ξ^1 → ⋯ → Ξ^q` with `d_V`.
pub fn vertical_complex(model: &Arc<FoliatedModel>, t: Truncation) -> Result<TruncatedComplex> {
  let action = model.require_action()?;
  let q = action.algebra.dim();
  let spaces: Vec<XiSpace> = (0..=q).map(|r| XiSpace::new(model, r, t)).collect();
  let maps = (0..q)
    .into_par_iter()
    .map(|r| {
      let (src, dst) = (&spaces[r], &spaces[r + 1]);
      let mut m = RationalMatrix::zeros(dst.dim(), src.dim());
      for a in 0..src.dim() {
        let image = src.element(a).d_v()?;
        for (b, v) in dst.coordinates(&image)?.into_iter().enumerate() {
          if !v.is_zero() {
            m.set(b, a, v);
          }
        }
      }
      Ok(m)
    })
    .collect::<Result<Vec<_>>>()?;
  let elements =
    spaces.iter().map(|s| (0..s.dim()).map(|a| s.element(a).representative().to_form()).collect()).collect();
  Ok(TruncatedComplex {
    label: "vertical".into(),
    start: 0,
    dims: spaces.iter().map(XiSpace::dim).collect(),
    maps,
    elements: Some(elements),
    truncation: Some(t),
  })
}

/// Vertical variational cohomology in positive degrees.
pub fn vertical_cohomology(model: &Arc<FoliatedModel>, t: Truncation) -> Result<CohomologyReport> {
  if model.action().is_some_and(|a| a.algebra.dim() == 0) {
    return Ok(CohomologyReport { label: "vertical".into(), dims: BTreeMap::new(), truncation: Some(t), witnesses: BTreeMap::new() });
  }
  vertical_complex(model, t)?.report(1, true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
  #[serde(rename = "equal")]
  Equal,
  #[serde(rename = "unequal")]
  Unequal,
}

/// Per-degree comparison of vertical and Chevalley–Eilenberg cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Comparison {
  /// `k ↦ (dim H^k vertical, dim H^k(g; Ξ^0))` for `k ≥ 1`.
  pub degrees: BTreeMap<usize, (usize, usize)>,
  pub verdict: Verdict,
  pub truncation: Truncation,
}

/// Compares the two sides with `Ξ^0` as the module.
pub fn theorem1_compare(model: &Arc<FoliatedModel>, t: Truncation) -> Result<Theorem1Comparison> {
  let module = xi0_module(model, t)?;
  theorem1_compare_with(model, t, &module)
}

/// Compares vertical cohomology with the cohomology of a supplied module, which
/// must have the dimension of the truncated `Ξ^0`.
pub fn theorem1_compare_with(model: &Arc<FoliatedModel>, t: Truncation, module: &CEModule) -> Result<Theorem1Comparison> {
  let xi0 = XiSpace::new(model, 0, t).dim();
  if module.dim != xi0 {
    return Err(Error::TruncationMismatch(format!("module of dimension {} against a {xi0}-dimensional Ξ^0", module.dim)));
  }
  let (vertical, ce) = rayon::join(|| vertical_complex(model, t)?.report(1, false), || ce_complex(module)?.report(1, false));
  let (vertical, ce) = (vertical?, ce?);
  let mut degrees = BTreeMap::new();
  for (&k, &v) in &vertical.dims {
    degrees.insert(k, (v, ce.dims.get(&k).copied().unwrap_or(0)));
  }
  for (&k, &c) in &ce.dims {
    degrees.entry(k).or_insert((0, c));
  }
  let verdict = if degrees.values().all(|(a, b)| a == b) { Verdict::Equal } else { Verdict::Unequal };
  Ok(Theorem1Comparison { degrees, verdict, truncation: t })
}

/// A candidate algebra with a module, for the obstruction scan.
#[derive(Clone, Debug)]
pub struct Candidate {
  pub name: String,
  pub module: CEModule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanVerdict {
  pub candidate: String,
  /// `"excluded"` or `"not excluded"`; agreement never certifies existence.
  pub verdict: String,
  /// First degree where the dimensions disagree.
  pub degree: Option<usize>,
  pub ce_dims: BTreeMap<usize, usize>,
}

/// Compares each candidate's Chevalley–Eilenberg dimensions with the
/// variational ones in positive degrees.
pub fn obstruction_scan(variational: &CohomologyReport, candidates: &[Candidate]) -> Result<Vec<ScanVerdict>> {
  candidates
    .par_iter()
    .map(|c| {
      let ce = ce_complex(&c.module)?.report(1, false)?;
      let degrees: std::collections::BTreeSet<usize> = variational.dims.keys().chain(ce.dims.keys()).copied().collect();
      let degree = degrees
        .into_iter()
        .filter(|k| *k >= 1)
        .find(|k| variational.dims.get(k).copied().unwrap_or(0) != ce.dims.get(k).copied().unwrap_or(0));
      Ok(ScanVerdict {
        candidate: c.name.clone(),
        verdict: if degree.is_some() { "excluded" } else { "not excluded" }.into(),
        degree,
        ce_dims: ce.dims,
      })
    })
    .collect()
}
