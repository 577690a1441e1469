mod common;

use std::sync::Arc;

use common::Gen;
use num_rational::BigRational;
use pfaffkit::cli::{parse_field, parse_form, parse_scalar};
use pfaffkit::cohomology::{ce_complex, CEModule};
use pfaffkit::exact_linalg::RationalMatrix;
use pfaffkit::group_action::LieAlgebraSpec;
use pfaffkit::scalars::{ChartModel, CoordKind};
use pfaffkit::variational::{theorem2_check, BigradedForm, FoliatedModel, XiClass};
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig { ProptestConfig { cases: 256, ..ProptestConfig::default() } }

fn torus() -> Arc<FoliatedModel> {
  let c = ChartModel::from_spec("t", &[("x", CoordKind::Periodic), ("y", CoordKind::Periodic)]).unwrap();
  FoliatedModel::new(&c, &["x"], &["y"])
    .unwrap()
    .with_action(LieAlgebraSpec::abelian(1), vec![parse_field(&c, "d/dy").unwrap()])
    .unwrap()
}

fn cylinder3() -> Arc<FoliatedModel> {
  let c = ChartModel::from_spec(
    "c",
    &[("x", CoordKind::Periodic), ("y1", CoordKind::Flat), ("y2", CoordKind::Periodic)],
  )
  .unwrap();
  FoliatedModel::new(&c, &["x"], &["y1", "y2"])
    .unwrap()
    .with_action(LieAlgebraSpec::abelian(2), vec![parse_field(&c, "d/dy1").unwrap(), parse_field(&c, "d/dy2").unwrap()])
    .unwrap()
}

proptest! {
  #![proptest_config(config())]

  #[test]
  fn scalar_ring_laws(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let c = g.chart(4);
    let (a, b, d) = (g.scalar(&c, 3), g.scalar(&c, 3), g.scalar(&c, 3));
    prop_assert_eq!(&(&a + &b) * &d, &(&a * &d) + &(&b * &d));
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(parse_scalar(&c, &a.to_string()).unwrap(), a.clone());
    // Leibniz rule for every coordinate
    for i in 0..c.dim() {
      prop_assert_eq!((&a * &b).partial_index(i), &(&a.partial_index(i) * &b) + &(&a * &b.partial_index(i)));
    }
  }

  #[test]
  fn forms_print_and_parse_back(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let c = g.chart(5);
    let k = g.degree(&c);
    let w = g.form(&c, k, 3);
    // `0` carries no degree in the text format
    if !w.is_zero() {
      prop_assert_eq!(parse_form(&c, &w.to_string()).unwrap(), w);
    }
    let xi = g.field(&c);
    prop_assert_eq!(parse_field(&c, &xi.to_string()).unwrap(), xi);
  }

  #[test]
  fn graded_anticommutativity_and_d_squared(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let c = g.chart(5);
    let (a, b) = (g.degree(&c), g.degree(&c));
    let w = g.form(&c, a, 3);
    let mu = g.form(&c, b, 2);
    let wm = w.wedge(&mu).unwrap();
    let mw = mu.wedge(&w).unwrap();
    prop_assert_eq!(wm.clone(), if a * b % 2 == 1 { mw.neg() } else { mw });
    prop_assert!(w.d().d().is_zero());
    // d is an antiderivation
    let second = w.wedge(&mu.d()).unwrap();
    let rhs = w.d().wedge(&mu).unwrap().try_add(&if a % 2 == 1 { second.neg() } else { second }).unwrap();
    prop_assert_eq!(wm.d(), rhs);
  }

  #[test]
  fn lie_derivative_is_a_derivation_commuting_with_d(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let c = g.chart_between(2, 4);
    let a = g.rng.gen_range(0..c.dim());
    let w = g.form(&c, a, 2);
    let mu = g.form(&c, c.dim() - 1 - a, 2);
    let xi = g.field(&c);
    let lhs = w.wedge(&mu).unwrap().lie_derivative(&xi).unwrap();
    let rhs = w
      .lie_derivative(&xi)
      .unwrap()
      .wedge(&mu)
      .unwrap()
      .try_add(&w.wedge(&mu.lie_derivative(&xi).unwrap()).unwrap())
      .unwrap();
    prop_assert_eq!(lhs, rhs);
    prop_assert_eq!(w.d().lie_derivative(&xi).unwrap(), w.lie_derivative(&xi).unwrap().d());
  }

  #[test]
  fn frolicher_nijenhuis_derivations(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let c = g.chart_between(2, 5);
    let k = g.rng.gen_range(0..c.dim());
    let w = g.form(&c, k, 3);
    let (u, v) = (g.vv(&c), g.vv(&c));
    // [d_u, d] = d_u d + d d_u = 0 for the odd operators d_u and d
    prop_assert!(w.d().fn_derivation(&u).unwrap().try_add(&w.fn_derivation(&u).unwrap().d()).unwrap().is_zero());
    // u ↦ d_u is linear
    let sum = u.try_add(&v).unwrap();
    prop_assert_eq!(
      w.fn_derivation(&sum).unwrap(),
      w.fn_derivation(&u).unwrap().try_add(&w.fn_derivation(&v).unwrap()).unwrap()
    );
    // i_u vanishes on functions
    let f = g.form(&c, 0, 1);
    prop_assert!(f.insert_vv(&u).unwrap().is_zero());
  }

  #[test]
  fn projections_of_random_splittings(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let c = g.chart_between(2, 4);
    let (sv, sh) = g.splitting(&c);
    let split = pfaffkit::pfaffian::make_splitting(&c, &sv, &sh).unwrap();
    prop_assert!(split.projection_identities_hold().unwrap());
    if sv.is_empty() || sh.is_empty() {
      return Ok(());
    }
    // d_V² = d_H² since V + H = Id; both vanish when both distributions are integrable
    let r = theorem2_check(&sv, &sh, &[g.form(&c, 1, 2)]).unwrap();
    prop_assert_eq!(r.d_v_squared_zero, r.d_h_squared_zero);
    prop_assert!(!(r.v_integrable && r.h_integrable) || r.d_v_squared_zero, "{:?}", r);
  }

  #[test]
  fn horizontally_exact_forms_have_zero_class(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let m = cylinder3();
    let c = m.chart().clone();
    let r = g.rng.gen_range(0..=2);
    // β of bidegree (r, 0); d_H β is a top horizontal form with zero class
    let beta = BigradedForm::component(&m, &g.form(&c, r, 3), r).unwrap();
    prop_assert!(XiClass::project(&beta.d_h()).unwrap().is_zero());
    // and the class map respects sums
    let w1 = BigradedForm::component(&m, &g.form(&c, r + 1, 3), r).unwrap();
    let sum = w1.try_add(&beta.d_h()).unwrap();
    prop_assert_eq!(XiClass::project(&sum).unwrap(), XiClass::project(&w1).unwrap());
  }

  #[test]
  fn vertical_differential_squares_to_zero(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    for m in [torus(), cylinder3()] {
      let c = m.chart().clone();
      let w = BigradedForm::component(&m, &g.form(&c, 1, 3), 0).unwrap();
      let class = XiClass::project(&w).unwrap();
      prop_assert_eq!(class.d_v().unwrap(), class.d_v_fn().unwrap());
      if m.q() >= 2 {
        prop_assert!(class.d_v().unwrap().d_v().unwrap().is_zero());
      }
    }
  }

  #[test]
  fn one_dimensional_ce_cohomology_is_kernel_and_cokernel(seed in any::<u64>()) {
    let mut g = Gen::new(seed);
    let n = g.rng.gen_range(1..=6usize);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| if g.rng.gen_bool(0.4) { g.rng.gen_range(-2..=2) } else { 0 }).collect()).collect();
    let rho = RationalMatrix::from_int_rows(&rows);
    let nullity = rho.kernel_basis().len();
    let m = CEModule::new(LieAlgebraSpec::abelian(1), n, vec![rho]).unwrap();
    prop_assert_eq!(ce_complex(&m).unwrap().cohomology().unwrap(), vec![nullity, nullity]);
  }

  #[test]
  fn shifted_modules_of_an_abelian_algebra_stay_representations(seed in any::<u64>(), c in -3i64..=3) {
    let mut g = Gen::new(seed);
    let n = g.rng.gen_range(1..=4usize);
    let a = RationalMatrix::from_int_rows(&(0..n).map(|_| (0..n).map(|_| g.rng.gen_range(-1..=1)).collect()).collect::<Vec<_>>());
    let m = CEModule::new(LieAlgebraSpec::abelian(1), n, vec![a]).unwrap();
    let shifted = m.shifted(0, BigRational::from_integer(c.into()));
    prop_assert_eq!(shifted.representation_failure().unwrap(), None);
    let complex = ce_complex(&shifted).unwrap();
    complex.check().unwrap();
  }
}
