use num_rational::BigRational;

use super::*;
use crate::cli::parse_field;
use crate::scalars::ChartModel;
use crate::scalars::CoordKind::{self, Flat, Periodic};

fn q(v: i64) -> BigRational { BigRational::from_integer(v.into()) }

fn foliated(coords: &[(&str, CoordKind)], h: &[&str], v: &[&str], fields: &[&str]) -> Arc<FoliatedModel> {
  let c = ChartModel::from_spec("m", coords).unwrap();
  let m = FoliatedModel::new(&c, h, v).unwrap();
  let fs = fields.iter().map(|f| parse_field(&c, f).unwrap()).collect();
  m.with_action(LieAlgebraSpec::abelian(fields.len()), fs).unwrap()
}

fn torus() -> Arc<FoliatedModel> { foliated(&[("x", Periodic), ("y", Periodic)], &["x"], &["y"], &["d/dy"]) }

fn cylinder() -> Arc<FoliatedModel> { foliated(&[("x", Periodic), ("y", Flat)], &["x"], &["y"], &["d/dy"]) }

fn flat_plane() -> Arc<FoliatedModel> { foliated(&[("y1", Flat), ("y2", Flat)], &[], &["y1", "y2"], &["d/dy1", "d/dy2"]) }

fn binomial(n: usize, k: usize) -> usize { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) }

/// `d/dy` on `span{1, cos y, sin y, …, cos Ky, sin Ky}`, written out by hand.
fn fourier_derivative(k: usize) -> CEModule {
  let n = 2 * k + 1;
  let mut rho = RationalMatrix::zeros(n, n);
  for j in 1..=k {
    let (c, s) = (2 * j - 1, 2 * j);
    // (cos jy)' = −j sin jy, (sin jy)' = j cos jy
    rho.set(s, c, q(-(j as i64)));
    rho.set(c, s, q(j as i64));
  }
  CEModule::new(LieAlgebraSpec::abelian(1), n, vec![rho]).unwrap()
}

#[test]
fn abelian_trivial_modules_give_binomials() {
  for n in 0..=4 {
    let c = ce_complex(&CEModule::trivial(LieAlgebraSpec::abelian(n), 1)).unwrap();
    let expected: Vec<usize> = (0..=n).map(|k| binomial(n, k)).collect();
    assert_eq!(c.cohomology().unwrap(), expected, "abelian({n})");
  }
  let c = ce_complex(&CEModule::trivial(LieAlgebraSpec::abelian(3), 2)).unwrap();
  assert_eq!(c.cohomology().unwrap(), vec![2, 6, 6, 2]);
}

#[test]
fn sl2_trivial_module() {
  let c = ce_complex(&CEModule::trivial(LieAlgebraSpec::sl2(), 1)).unwrap();
  assert_eq!(c.dims, vec![1, 3, 3, 1]);
  assert_eq!(c.cohomology().unwrap(), vec![1, 0, 0, 1]);
}

#[test]
fn ce_differential_squares_to_zero_on_the_adjoint_module() {
  let g = LieAlgebraSpec::sl2();
  let rho = (0..3)
    .map(|i| {
      let mut m = RationalMatrix::zeros(3, 3);
      for j in 0..3 {
        for k in 0..3 {
          m.set(k, j, g.constant(i, j, k).clone());
        }
      }
      m
    })
    .collect();
  let adj = CEModule::new(g, 3, rho).unwrap();
  assert_eq!(adj.representation_failure().unwrap(), None);
  let c = ce_complex(&adj).unwrap();
  c.check().unwrap();
  // semisimple: H^k(sl2; adjoint) = 0 for every k
  assert_eq!(c.cohomology().unwrap(), vec![0, 0, 0, 0]);
}

#[test]
fn invalid_modules_are_rejected() {
  let g = LieAlgebraSpec::sl2();
  assert!(matches!(CEModule::new(g.clone(), 2, vec![]), Err(Error::InvalidModule(_))));
  let mut rho = vec![RationalMatrix::zeros(1, 1); 3];
  rho[0] = RationalMatrix::identity(1);
  let m = CEModule::new(g, 1, rho).unwrap();
  // [h, e] = 2e but ρ(e) = 0 while ρ(h) = 1 commutes with everything: fine;
  // [e, f] = h needs ρ(h) = [ρ(e), ρ(f)] = 0
  assert!(m.representation_failure().unwrap().is_some());
  assert!(matches!(ce_differential(&m, 0), Err(Error::InvalidModule(_))));
}

#[test]
fn fourier_module_cohomology() {
  for k in [1, 3, 5] {
    let c = ce_complex(&fourier_derivative(k)).unwrap();
    assert_eq!(c.cohomology().unwrap(), vec![1, 1], "K = {k}");
  }
}

#[test]
fn xi0_module_matches_the_hand_built_one() {
  let t = torus();
  let m = xi0_module(&t, Truncation::new(3, 3)).unwrap();
  assert_eq!(m.dim, 7);
  let c = ce_complex(&m).unwrap();
  assert_eq!(c.cohomology().unwrap(), ce_complex(&fourier_derivative(3)).unwrap().cohomology().unwrap());
}

#[test]
fn torus_vertical_cohomology_ladder() {
  let t = torus();
  for k in [3, 5, 8] {
    let r = vertical_cohomology(&t, Truncation::new(3, k)).unwrap();
    assert_eq!(r.dims, BTreeMap::from([(1, 1)]), "K = {k}");
    assert_eq!(r.witnesses[&1].len(), 1);
  }
  let c = vertical_complex(&t, Truncation::new(3, 2)).unwrap();
  assert_eq!(c.dims, vec![5, 5]);
  assert_eq!(c.cohomology().unwrap(), vec![1, 1]);
  let r = vertical_cohomology(&t, Truncation::new(3, 2)).unwrap();
  assert_eq!(r.witnesses[&1], vec!["-dx∧dy".to_string()]);
}

#[test]
fn flat_vertical_cohomology() {
  let c = cylinder();
  let r = vertical_cohomology(&c, Truncation::new(5, 2)).unwrap();
  assert_eq!(r.dims, BTreeMap::from([(1, 0)]));
  let p = flat_plane();
  for d in [3, 5] {
    let cx = vertical_complex(&p, Truncation::new(d, 0)).unwrap();
    // polynomial de Rham complex of the plane
    assert_eq!(cx.cohomology().unwrap(), vec![1, 0, 0]);
  }
  // a flat horizontal coordinate leaves nothing in Ξ
  let r2 = foliated(&[("x", Flat), ("y", Flat)], &["x"], &["y"], &["d/dy"]);
  let cx = vertical_complex(&r2, Truncation::new(3, 0)).unwrap();
  assert_eq!(cx.dims, vec![0, 0]);
  assert_eq!(vertical_cohomology(&r2, Truncation::new(3, 0)).unwrap().dims, BTreeMap::from([(1, 0)]));
}

#[test]
fn variational_and_lie_algebra_cohomology_agree() {
  let t = torus();
  let cyl = cylinder();
  let plane = flat_plane();
  for d in [3, 5] {
    for k in [3, 5, 8] {
      let tr = Truncation::new(d, k);
      let c = theorem1_compare(&t, tr).unwrap();
      assert_eq!(c.verdict, Verdict::Equal);
      assert_eq!(c.degrees[&1], (1, 1));
      assert_eq!(theorem1_compare(&cyl, tr).unwrap().verdict, Verdict::Equal, "cylinder {tr}");
      let c = theorem1_compare(&plane, Truncation::new(d, 0)).unwrap();
      assert_eq!(c.verdict, Verdict::Equal, "plane {tr}");
      assert_eq!(c.degrees, BTreeMap::from([(1, (0, 0)), (2, (0, 0))]));
    }
  }
}

#[test]
fn nonabelian_coframe_needs_a_localization() {
  let c = ChartModel::from_spec("aff", &[("x", Periodic), ("u", Flat), ("v", Flat)]).unwrap();
  let m = FoliatedModel::new(&c, &["x"], &["u", "v"]).unwrap();
  let g = LieAlgebraSpec::new(vec!["e1".into(), "e2".into()], &[(0, 1, vec![(0, q(1))])]).unwrap();
  let fs = vec![parse_field(&c, "d/du").unwrap(), parse_field(&c, "u*d/du + v*d/dv").unwrap()];
  // the Cartan coframe needs 1/v, which leaves the polynomial truncation
  let e = m.with_action(g, fs);
  assert!(matches!(e, Err(Error::LocalizationNeeded { .. })));
}

#[test]
fn corrupted_representation_is_flagged() {
  let t = torus();
  let tr = Truncation::new(3, 3);
  let good = xi0_module(&t, tr).unwrap();
  let bad = good.shifted(0, q(1));
  let c = theorem1_compare_with(&t, tr, &bad).unwrap();
  assert_eq!(c.verdict, Verdict::Unequal);
  assert_eq!(c.degrees[&1], (1, 0));
  let small = CEModule::trivial(LieAlgebraSpec::abelian(1), 2);
  assert!(matches!(theorem1_compare_with(&t, tr, &small), Err(Error::TruncationMismatch(_))));
}

#[test]
fn obstruction_scan_verdicts() {
  let variational = vertical_cohomology(&cylinder(), Truncation::new(5, 3)).unwrap();
  let mut unit = RationalMatrix::zeros(1, 1);
  unit.set(0, 0, q(1));
  let candidates = vec![
    Candidate { name: "fourier".into(), module: fourier_derivative(3) },
    Candidate { name: "scaling".into(), module: CEModule::new(LieAlgebraSpec::abelian(1), 1, vec![unit]).unwrap() },
  ];
  let v = obstruction_scan(&variational, &candidates).unwrap();
  assert_eq!(v[0].verdict, "excluded");
  assert_eq!(v[0].degree, Some(1));
  assert_eq!(v[0].ce_dims, BTreeMap::from([(1, 1)]));
  assert_eq!(v[1].verdict, "not excluded");
  assert_eq!(v[1].degree, None);
  assert!(obstruction_scan(&variational, &[]).unwrap().is_empty());
}

#[test]
fn complex_checks() {
  let mut a = RationalMatrix::zeros(1, 1);
  a.set(0, 0, q(1));
  let bad = TruncatedComplex {
    label: "bad".into(),
    start: 0,
    dims: vec![1, 1, 1],
    maps: vec![a.clone(), a],
    elements: None,
    truncation: None,
  };
  assert!(matches!(bad.check(), Err(Error::ComplexViolation(_))));
  let wrong = TruncatedComplex {
    label: "shape".into(),
    start: 0,
    dims: vec![2, 1],
    maps: vec![RationalMatrix::zeros(1, 1)],
    elements: None,
    truncation: None,
  };
  assert!(wrong.check().is_err());
}

#[test]
fn cohomology_is_invariant_under_permutation() {
  let m = fourier_derivative(2);
  let d0 = ce_differential(&m, 0).unwrap();
  let none = RationalMatrix::zeros(0, 5);
  assert_eq!(cohomology_dim(&d0, &none).unwrap(), 1);
  let perm = [3, 1, 4, 0, 2];
  assert_eq!(cohomology_dim(&d0.permute_rows(&perm), &none.permute_columns(&perm)).unwrap(), 1);
}

#[test]
fn reports_serialize_deterministically() {
  let r = vertical_cohomology(&torus(), Truncation::new(3, 3)).unwrap();
  let a = serde_json::to_string(&r).unwrap();
  let b = serde_json::to_string(&vertical_cohomology(&torus(), Truncation::new(3, 3)).unwrap()).unwrap();
  assert_eq!(a, b);
  assert!(a.contains("\"dims\":{\"1\":1}"));
}
