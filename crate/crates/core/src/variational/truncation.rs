//! Finite-dimensional truncations: coefficients restricted to a weighted
//! polynomial degree and a Fourier frequency bound.
//!
//! The weight of `m · dx^I` is the total degree of `m` in the flat coordinates
//! plus the number of flat differentials in `dx^I`. The exterior derivative and
//! the Lie derivative along constant-coefficient fields preserve or lower it.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use smallvec::SmallVec;

use super::xi::subsets;
use super::{FoliatedModel, XiClass};
use crate::cartan_calculus::{DifferentialForm, Indices, VectorField};
use crate::cohomology::TruncatedComplex;
use crate::error::{Error, Result};
use crate::exact_linalg::{RationalMatrix, Subspace};
use crate::pfaffian::PfaffianSystem;
use crate::scalars::{ChartModel, CoordKind, Mono, ScalarExpr};

/// Bounds on the coefficient ring: weighted degree `≤ degree` and `|k| ≤ freq`
/// for every Fourier mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Truncation {
  pub degree: u32,
  pub freq: u32,
}

impl Truncation {
  pub fn new(degree: u32, freq: u32) -> Self { Self { degree, freq } }
}

impl std::fmt::Display for Truncation {
  fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    write!(f, "degree {} freq {}", self.degree, self.freq)
  }
}

pub(crate) fn mono_weight(chart: &ChartModel, m: &Mono) -> u32 {
  chart.flat_indices().iter().map(|&i| m[i] as u32).sum()
}

pub(crate) fn index_weight(chart: &ChartModel, idx: &[u8]) -> u32 {
  idx.iter().filter(|&&i| chart.kind(i as usize) == CoordKind::Flat).count() as u32
}

/// All monomials in the coordinates `vary` (others held at 0) of weight at most
/// `max_weight` and frequency at most `t.freq`, in increasing order.
pub(crate) fn monomials(chart: &ChartModel, vary: &[usize], t: Truncation, max_weight: u32) -> Vec<Mono> {
  fn go(chart: &ChartModel, vary: &[usize], t: Truncation, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
    let Some((&i, rest)) = vary.split_first() else {
      out.push(cur.clone());
      return;
    };
    match chart.kind(i) {
      CoordKind::Flat => {
        for e in 0..=left {
          cur[i] = e as i32;
          go(chart, rest, t, left - e, cur, out);
        }
      },
      CoordKind::Periodic => {
        let k = t.freq as i32;
        for code in -k..=k {
          cur[i] = code;
          go(chart, rest, t, left, cur, out);
        }
      },
    }
    cur[i] = 0;
  }
  let mut out = Vec::new();
  let mut cur: Mono = SmallVec::from_elem(0, chart.dim());
  go(chart, vary, t, max_weight, &mut cur, &mut out);
  out.sort();
  out
}

fn index_sets(pool: &[usize], k: usize) -> Vec<Indices> {
  subsets(pool.len(), k).into_iter().map(|s| s.into_iter().map(|i| pool[i] as u8).collect()).collect()
}

/// A truncated space of `ℓ`-forms spanned by `m · dx^I`.
#[derive(Clone, Debug)]
pub struct FormSpace {
  chart: Arc<ChartModel>,
  degree: usize,
  basis: Vec<(Indices, Mono)>,
  index: BTreeMap<(Indices, Mono), usize>,
}

impl FormSpace {
  /// Forms with index sets from `sets` and coefficients in the coordinates `vary`.
  pub fn new(chart: &Arc<ChartModel>, degree: usize, sets: &[Indices], vary: &[usize], t: Truncation) -> Self {
    let mut basis = Vec::new();
    for idx in sets {
      let w = index_weight(chart, idx);
      if w > t.degree {
        continue;
      }
      for m in monomials(chart, vary, t, t.degree - w) {
        basis.push((idx.clone(), m));
      }
    }
    let index = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    Self { chart: chart.clone(), degree, basis, index }
  }

  /// All truncated `ℓ`-forms on the chart.
  pub fn all_forms(chart: &Arc<ChartModel>, degree: usize, t: Truncation) -> Self {
    let coords: Vec<usize> = (0..chart.dim()).collect();
    Self::new(chart, degree, &index_sets(&coords, degree), &coords, t)
  }

  pub fn dim(&self) -> usize { self.basis.len() }

  pub fn degree(&self) -> usize { self.degree }

  pub fn element(&self, k: usize) -> DifferentialForm {
    let (idx, m) = &self.basis[k];
    let mut w = DifferentialForm::zero(&self.chart, self.degree);
    w.add_term(idx.clone(), ScalarExpr::from_mono(&self.chart, m.clone(), BigRational::one()));
    w
  }

  pub fn combination(&self, v: &[BigRational]) -> DifferentialForm {
    let mut w = DifferentialForm::zero(&self.chart, self.degree);
    for (k, c) in v.iter().enumerate() {
      if c.is_zero() {
        continue;
      }
      let (idx, m) = &self.basis[k];
      w.add_term(idx.clone(), ScalarExpr::from_mono(&self.chart, m.clone(), c.clone()));
    }
    w
  }

  /// Coordinates of `w`; fails when `w` leaves the truncated space.
  pub fn coordinates(&self, w: &DifferentialForm) -> Result<Vec<BigRational>> {
    if w.degree() != self.degree && !w.is_zero() {
      return Err(Error::TruncationMismatch(format!("a {}-form in a space of {}-forms", w.degree(), self.degree)));
    }
    let mut v = vec![BigRational::zero(); self.dim()];
    for (idx, a) in w.terms() {
      if a.has_denominator() {
        return Err(Error::TruncationNotClosed(format!("coefficient `{a}` has a denominator")));
      }
      for (m, c) in a.terms() {
        let Some(&k) = self.index.get(&(idx.clone(), m.clone())) else {
          let term = ScalarExpr::from_mono(&self.chart, m.clone(), c.clone());
          let mut f = DifferentialForm::zero(&self.chart, self.degree);
          f.add_term(idx.clone(), term);
          return Err(Error::TruncationNotClosed(format!("`{f}` lies outside the truncation")));
        };
        v[k] = c.clone();
      }
    }
    Ok(v)
  }
}

/// Matrix of a linear map whose column `c` is the image `images[c]`, each image
/// a sparse vector of scalars. Scalars in a slot are brought to a common
/// denominator first, so linear relations are detected exactly.
pub(crate) fn linear_map_matrix<K: Ord + Clone>(images: &[BTreeMap<K, ScalarExpr>]) -> RationalMatrix {
  let mut common: BTreeMap<K, Vec<u32>> = BTreeMap::new();
  for img in images {
    for (k, a) in img {
      let e = common.entry(k.clone()).or_insert_with(|| vec![0; a.den_exponents().len()]);
      for (x, &y) in e.iter_mut().zip(a.den_exponents()) {
        *x = (*x).max(y);
      }
    }
  }
  let mut rows: BTreeMap<(K, Mono), usize> = BTreeMap::new();
  let mut entries: Vec<(usize, usize, BigRational)> = Vec::new();
  for (c, img) in images.iter().enumerate() {
    for (k, a) in img {
      let mut num = a.clone();
      for (j, &e) in common[k].iter().enumerate() {
        if e > 0 {
          num = num * ScalarExpr::denominator(a.chart(), j).pow(e);
        }
      }
      for (m, x) in num.terms() {
        let n = rows.len();
        let r = *rows.entry((k.clone(), m.clone())).or_insert(n);
        entries.push((r, c, x.clone()));
      }
    }
  }
  let mut out = RationalMatrix::zeros(rows.len(), images.len());
  for (r, c, x) in entries {
    out.add_to(r, c, &x);
  }
  out
}

fn form_image(tag: usize, w: &DifferentialForm, into: &mut BTreeMap<(usize, Indices), ScalarExpr>) {
  for (idx, a) in w.terms() {
    into.insert((tag, idx.clone()), a.clone());
  }
}

/// Subspaces `W_ℓ ⊂ F_ℓ` closed under `d`, assembled into a complex.
fn subcomplex(
  label: &str,
  spaces: &[FormSpace],
  subspaces: &[Subspace],
  diff: impl Fn(&DifferentialForm) -> Result<DifferentialForm>,
  t: Truncation,
) -> Result<TruncatedComplex> {
  let mut maps = Vec::new();
  let mut elements = Vec::new();
  for (l, (f, w)) in spaces.iter().zip(subspaces).enumerate() {
    let basis: Vec<DifferentialForm> = w.basis().iter().map(|b| f.combination(b)).collect();
    if let Some(next) = spaces.get(l + 1) {
      let target = &subspaces[l + 1];
      let mut m = RationalMatrix::zeros(target.dim(), w.dim());
      for (c, b) in basis.iter().enumerate() {
        let db = diff(b)?;
        let coords = target
          .coordinates(&next.coordinates(&db)?)
          .ok_or_else(|| Error::ComplexViolation(format!("d({b}) = {db} is not in the subcomplex {label}")))?;
        for (r, x) in coords.into_iter().enumerate() {
          m.set(r, c, x);
        }
      }
      maps.push(m);
    } else {
      for b in &basis {
        if !diff(b)?.is_zero() {
          return Err(Error::ComplexViolation(format!("d({b}) ≠ 0 in the top degree of {label}")));
        }
      }
    }
    elements.push(basis);
  }
  Ok(TruncatedComplex {
    label: label.to_string(),
    start: 0,
    dims: subspaces.iter().map(Subspace::dim).collect(),
    maps,
    elements: Some(elements),
    truncation: Some(t),
  })
}

/// The truncated complex `ℐ^0(𝒮) → ℐ^1(𝒮) → ⋯ → ℐ^q(𝒮)` of invariant forms
/// (`i(η)ω = i(η)dω = 0` for `η` tangent to `Σ`) with the exterior derivative.
pub fn invariant_complex(system: &PfaffianSystem, t: Truncation) -> Result<TruncatedComplex> {
  let chart = system.chart();
  let sigma = system.annihilator();
  let q = system.rank();
  let mut spaces = Vec::new();
  let mut subspaces = Vec::new();
  for l in 0..=q {
    let f = FormSpace::all_forms(chart, l, t);
    let mut images = Vec::with_capacity(f.dim());
    for k in 0..f.dim() {
      let w = f.element(k);
      let dw = w.d();
      let mut img = BTreeMap::new();
      for (a, eta) in sigma.fields().iter().enumerate() {
        form_image(2 * a, &w.interior(eta)?, &mut img);
        form_image(2 * a + 1, &dw.interior(eta)?, &mut img);
      }
      images.push(img);
    }
    let kernel = linear_map_matrix(&images).kernel_basis();
    subspaces.push(Subspace::span(f.dim(), &kernel));
    spaces.push(f);
  }
  subcomplex("invariant", &spaces, &subspaces, |w| Ok(w.d()), t)
}

/// The truncated complex `𝒥^0 → ⋯ → 𝒥^p` of horizontal forms annihilated by
/// `θ(Φ(e_i))` for every action field (all horizontal forms without an action),
/// with the horizontal part of `d` as differential.
pub fn equivariant_complex(model: &Arc<FoliatedModel>, t: Truncation) -> Result<TruncatedComplex> {
  let chart = model.chart();
  let fields: Vec<VectorField> = model.action().map(|a| a.fields.clone()).unwrap_or_default();
  let coords: Vec<usize> = (0..chart.dim()).collect();
  let mut spaces = Vec::new();
  let mut subspaces = Vec::new();
  for l in 0..=model.p() {
    let f = FormSpace::new(chart, l, &index_sets(model.horizontal(), l), &coords, t);
    let mut images = Vec::with_capacity(f.dim());
    for k in 0..f.dim() {
      let w = f.element(k);
      let mut img = BTreeMap::new();
      for (a, xi) in fields.iter().enumerate() {
        form_image(a, &w.lie_derivative(xi)?, &mut img);
      }
      images.push(img);
    }
    let kernel = linear_map_matrix(&images).kernel_basis();
    subspaces.push(Subspace::span(f.dim(), &kernel));
    spaces.push(f);
  }
  // With a transversally free action the invariant horizontal forms are closed
  // under d; without one, d is followed by the projection to horizontal forms.
  let strict = model.action().is_some_and(|a| a.algebra.dim() == model.q());
  let horizontal = |idx: &[u8]| idx.iter().all(|&i| model.is_horizontal(i as usize));
  let diff = |w: &DifferentialForm| {
    let dw = w.d();
    let h = dw.filter_indices(horizontal);
    if strict && h != dw {
      return Err(Error::ComplexViolation(format!("d({w}) = {dw} is not horizontal")));
    }
    Ok(h)
  };
  subcomplex("equivariant", &spaces, &subspaces, diff, t)
}

/// The truncated `Ξ^r`: classes `Σ_J a_J dy^J ⊗ μ` with `a_J` in the vertical
/// coordinates, of weight `wt(a_J) + wt(dy^J) + wt(μ) ≤ degree`.
#[derive(Clone, Debug)]
pub struct XiSpace {
  model: Arc<FoliatedModel>,
  r: usize,
  basis: Vec<(Indices, Mono)>,
  index: BTreeMap<(Indices, Mono), usize>,
}

impl XiSpace {
  pub fn new(model: &Arc<FoliatedModel>, r: usize, t: Truncation) -> Self {
    let chart = model.chart();
    let mut basis = Vec::new();
    if !model.has_flat_horizontal() {
      for j in index_sets(model.vertical(), r) {
        let w = index_weight(chart, &j);
        if w > t.degree {
          continue;
        }
        for m in monomials(chart, model.vertical(), t, t.degree - w) {
          basis.push((j.clone(), m));
        }
      }
    }
    let index = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    Self { model: model.clone(), r, basis, index }
  }

  pub fn dim(&self) -> usize { self.basis.len() }

  /// Weight of the coefficient monomial of basis element `k`.
  pub fn coefficient_weight(&self, k: usize) -> u32 { mono_weight(self.model.chart(), &self.basis[k].1) }

  pub fn element(&self, k: usize) -> XiClass {
    let (j, m) = &self.basis[k];
    let chart = self.model.chart();
    let mut rep = super::BigradedForm::zero(&self.model, self.r, self.model.p());
    let top: Indices = self.model.horizontal().iter().map(|&h| h as u8).collect();
    rep.add_term(j.clone(), top, ScalarExpr::from_mono(chart, m.clone(), BigRational::one()));
    XiClass::project(&rep).expect("representative has top horizontal degree")
  }

  pub fn coordinates(&self, c: &XiClass) -> Result<Vec<BigRational>> {
    if c.degree() != self.r {
      return Err(Error::TruncationMismatch(format!("a class of degree {} in Ξ^{}", c.degree(), self.r)));
    }
    let mut v = vec![BigRational::zero(); self.dim()];
    for (j, a) in c.coefficients() {
      if a.has_denominator() {
        return Err(Error::TruncationNotClosed(format!("coefficient `{a}` has a denominator")));
      }
      for (m, x) in a.terms() {
        let k = self.index.get(&(j.clone(), m.clone())).ok_or_else(|| {
          Error::TruncationNotClosed(format!("{c} leaves the truncated Ξ^{} ({})", self.r, self.basis.len()))
        })?;
        v[*k] = x.clone();
      }
    }
    Ok(v)
  }
}
