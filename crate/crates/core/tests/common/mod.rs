//! Seeded random charts, scalars, forms, fields and vector-valued 1-forms.
#![allow(dead_code)]

use std::sync::Arc;

use num_rational::BigRational;
use pfaffkit::cartan_calculus::{DifferentialForm, VectorField, VectorValuedOneForm};
use pfaffkit::scalars::{ChartModel, CoordKind, ScalarExpr};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
  pub rng: ChaCha8Rng,
}

impl Gen {
  pub fn new(seed: u64) -> Self { Self { rng: ChaCha8Rng::seed_from_u64(seed) } }

  /// A chart of dimension `1..=max_dim` with a random mix of flat and periodic coordinates.
  pub fn chart(&mut self, max_dim: usize) -> Arc<ChartModel> { self.chart_between(1, max_dim) }

  pub fn chart_between(&mut self, min_dim: usize, max_dim: usize) -> Arc<ChartModel> {
    let n = self.rng.gen_range(min_dim..=max_dim);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let spec: Vec<(&str, CoordKind)> = names
      .iter()
      .map(|s| (s.as_str(), if self.rng.gen_bool(0.3) { CoordKind::Periodic } else { CoordKind::Flat }))
      .collect();
    ChartModel::from_spec("r", &spec).unwrap()
  }

  pub fn flat_chart(&mut self, n: usize) -> Arc<ChartModel> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let spec: Vec<(&str, CoordKind)> = names.iter().map(|s| (s.as_str(), CoordKind::Flat)).collect();
    ChartModel::from_spec("flat", &spec).unwrap()
  }

  fn rational(&mut self) -> BigRational {
    let n: i64 = self.rng.gen_range(-3..=3);
    let d: i64 = if self.rng.gen_bool(0.2) { 2 } else { 1 };
    BigRational::new(n.into(), d.into())
  }

  /// One term: a rational times a monomial in the flat coordinates times at
  /// most one sine or cosine of a periodic coordinate.
  pub fn term(&mut self, chart: &Arc<ChartModel>) -> ScalarExpr {
    let mut entries = Vec::new();
    let mut trig = None;
    for i in 0..chart.dim() {
      match chart.kind(i) {
        CoordKind::Flat => {
          let e = self.rng.gen_range(0..=2);
          if e > 0 && self.rng.gen_bool(0.5) {
            entries.push((i, e));
          }
        },
        CoordKind::Periodic => {
          if trig.is_none() && self.rng.gen_bool(0.4) {
            trig = Some((i, self.rng.gen_bool(0.5), self.rng.gen_range(1..=2)));
          }
        },
      }
    }
    let mut c = self.rational();
    if c == BigRational::from_integer(0.into()) {
      c = BigRational::from_integer(1.into());
    }
    let m = ScalarExpr::monomial(chart, c, &entries);
    match trig {
      Some((i, is_sin, k)) => {
        let t = ScalarExpr::trig(chart, &chart.coords()[i].name, is_sin, k).unwrap();
        m.try_mul(&t).unwrap()
      },
      None => m,
    }
  }

  pub fn scalar(&mut self, chart: &Arc<ChartModel>, max_terms: usize) -> ScalarExpr {
    let k = self.rng.gen_range(0..=max_terms);
    let mut s = ScalarExpr::zero(chart);
    for _ in 0..k {
      s = s.try_add(&self.term(chart)).unwrap();
    }
    s
  }

  /// A random `degree`-form with at most `max_terms` basis terms.
  pub fn form(&mut self, chart: &Arc<ChartModel>, degree: usize, max_terms: usize) -> DifferentialForm {
    let n = chart.dim();
    let mut w = DifferentialForm::zero(chart, degree);
    if degree > n {
      return w;
    }
    for _ in 0..self.rng.gen_range(1..=max_terms) {
      let mut idx: Vec<usize> = sample(&mut self.rng, n, degree).into_vec();
      idx.sort_unstable();
      let mut a = self.scalar(chart, 2);
      if a.is_zero() {
        a = self.term(chart);
      }
      w = w.try_add(&DifferentialForm::basis(a, &idx)).unwrap();
    }
    w
  }

  pub fn degree(&mut self, chart: &Arc<ChartModel>) -> usize { self.rng.gen_range(0..=chart.dim()) }

  pub fn field(&mut self, chart: &Arc<ChartModel>) -> VectorField {
    let comps = (0..chart.dim()).map(|_| if self.rng.gen_bool(0.6) { self.scalar(chart, 2) } else { ScalarExpr::zero(chart) }).collect();
    VectorField::new(chart, comps).unwrap()
  }

  /// A sparse vector-valued 1-form.
  pub fn vv(&mut self, chart: &Arc<ChartModel>) -> VectorValuedOneForm {
    let n = chart.dim();
    let m = (0..n)
      .map(|_| (0..n).map(|_| if self.rng.gen_bool(0.6) { self.term(chart) } else { ScalarExpr::zero(chart) }).collect())
      .collect();
    VectorValuedOneForm::from_matrix(chart, m).unwrap()
  }

  /// A complementary pair `Σ_V = span{∂_v + Σ a ∂_h}`, `Σ_H = span{∂_h}` over a
  /// random partition of the coordinates.
  pub fn splitting(&mut self, chart: &Arc<ChartModel>) -> (Vec<VectorField>, Vec<VectorField>) {
    let n = chart.dim();
    let nv = self.rng.gen_range(0..=n);
    let vertical: Vec<usize> = sample(&mut self.rng, n, nv).into_vec();
    let horizontal: Vec<usize> = (0..n).filter(|i| !vertical.contains(i)).collect();
    let sigma_h: Vec<VectorField> = horizontal.iter().map(|&i| VectorField::coordinate_index(chart, i)).collect();
    let sigma_v = vertical
      .iter()
      .map(|&v| {
        let mut comps = vec![ScalarExpr::zero(chart); n];
        comps[v] = ScalarExpr::one(chart);
        for &h in &horizontal {
          if self.rng.gen_bool(0.5) {
            comps[h] = self.scalar(chart, 1);
          }
        }
        VectorField::new(chart, comps).unwrap()
      })
      .collect();
    (sigma_v, sigma_h)
  }
}
