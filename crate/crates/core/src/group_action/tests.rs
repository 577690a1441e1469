use super::*;
use crate::cli::{parse_field, parse_form, parse_scalar};
use crate::scalars::CoordKind::{Flat, Periodic};

fn q(v: i64) -> BigRational { BigRational::from_integer(v.into()) }

fn field(c: &Arc<ChartModel>, s: &str) -> VectorField { parse_field(c, s).unwrap() }

fn form(c: &Arc<ChartModel>, s: &str) -> DifferentialForm { parse_form(c, s).unwrap() }

fn torus_action() -> ActionSpec {
  let c = ChartModel::from_spec("torus", &[("x", Periodic), ("y", Periodic)]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "dy")]).unwrap();
  ActionSpec::new(LieAlgebraSpec::abelian(1), vec![field(&c, "d/dy")], s).unwrap()
}

fn plane_action() -> ActionSpec {
  let c = ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "dy")]).unwrap();
  ActionSpec::new(LieAlgebraSpec::abelian(1), vec![field(&c, "d/dy")], s).unwrap()
}

fn affine_algebra() -> LieAlgebraSpec {
  LieAlgebraSpec::new(vec!["e1".into(), "e2".into()], &[(0, 1, vec![(0, q(1))])]).unwrap()
}

fn affine_action() -> ActionSpec {
  let c = ChartModel::from_spec("uv", &[("u", Flat), ("v", Flat)]).unwrap();
  let c = c.localize(&[parse_scalar(&c, "v").unwrap()]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "du"), form(&c, "dv/v")]).unwrap();
  ActionSpec::new(affine_algebra(), vec![field(&c, "d/du"), field(&c, "u*d/du + v*d/dv")], s).unwrap()
}

#[test]
fn algebra_validation() {
  assert!(LieAlgebraSpec::sl2().jacobi_holds());
  assert!(affine_algebra().is_antisymmetric());
  // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2 is so(3)
  let so3 = LieAlgebraSpec::new(
    vec!["a".into(), "b".into(), "c".into()],
    &[(0, 1, vec![(2, q(1))]), (1, 2, vec![(0, q(1))]), (2, 0, vec![(1, q(1))])],
  );
  assert!(so3.is_ok());
  // [a,b] = a, [a,c] = b, [b,c] = 0 breaks Jacobi
  let bad = LieAlgebraSpec::new(
    vec!["a".into(), "b".into(), "c".into()],
    &[(0, 1, vec![(0, q(1))]), (0, 2, vec![(1, q(1))])],
  );
  assert!(matches!(bad, Err(Error::InvalidAlgebra(_))));
  assert_eq!(affine_algebra().to_string(), "{e1, e2} bracket [e1, e2] = e1");
}

#[test]
fn check_action_reports() {
  assert!(torus_action().check_action().unwrap().all_hold());
  assert!(affine_action().check_action().unwrap().all_hold());
  let c = ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "dy - dx")]).unwrap();
  let a = ActionSpec::new(LieAlgebraSpec::abelian(1), vec![field(&c, "y*d/dx")], s).unwrap();
  assert_eq!(a.check_action().unwrap().symmetries, vec![false]);
  // wrong constants: d/du and u d/du + v d/dv do not commute
  let mut aff = affine_action();
  aff.algebra = LieAlgebraSpec::abelian(2);
  assert!(!aff.check_action().unwrap().bracket_compatible);
}

#[test]
fn transversality() {
  assert!(torus_action().check_transversally_free().holds());
  let c = ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "dy")]).unwrap();
  let a = ActionSpec::new(LieAlgebraSpec::abelian(2), vec![field(&c, "d/dy"), field(&c, "x*d/dy")], s.clone()).unwrap();
  let t = a.check_transversally_free();
  assert!(!t.independent && !t.complementary);
  let b = ActionSpec::new(LieAlgebraSpec::abelian(1), vec![field(&c, "d/dx")], s).unwrap();
  let t = b.check_transversally_free();
  assert!(t.independent && !t.complementary);
  assert!(t.diagnostic.unwrap().contains("(ii)"));
}

#[test]
fn cartan_bases() {
  let t = torus_action();
  assert_eq!(t.cartan_basis().unwrap().forms, vec![form(t.chart(), "dy")]);
  let a = affine_action();
  let b = a.cartan_basis().unwrap();
  let c = a.chart();
  assert_eq!(b.forms, vec![form(c, "du - u/v*dv"), form(c, "dv/v")]);
  assert_eq!(b.forms[0].d(), b.forms[0].wedge(&b.forms[1]).unwrap().neg());
  assert!(b.forms[1].d().is_zero());
  assert!(b.verify_structure_equation(&a.algebra, SignConvention::Negated).unwrap());
  assert!(!b.verify_structure_equation(&a.algebra, SignConvention::Direct).unwrap());
  let corrupted = a.algebra.with_corrupted_constant(0, 1, 0, q(2));
  assert!(!b.verify_structure_equation(&corrupted, SignConvention::Negated).unwrap());
  assert!(t.cartan_basis().unwrap().verify_structure_equation(&t.algebra, SignConvention::Negated).unwrap());
  // duality and vanishing on Σ
  for (i, w) in b.forms.iter().enumerate() {
    for (j, f) in a.fields.iter().enumerate() {
      assert_eq!(w.pair(f).unwrap(), ScalarExpr::integer(c, i64::from(i == j)));
    }
  }
}

#[test]
fn cartan_basis_needs_a_unit_determinant() {
  let c = ChartModel::from_spec("uv", &[("u", Flat), ("v", Flat)]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "du"), form(&c, "dv")]).unwrap();
  let a = ActionSpec::new(affine_algebra(), vec![field(&c, "d/du"), field(&c, "u*d/du + v*d/dv")], s).unwrap();
  let e = a.cartan_basis().unwrap_err();
  assert_eq!(e, Error::LocalizationNeeded { what: "Cartan basis".into(), denominator: "v".into() });
}

#[test]
fn abelian_coframes_are_closed() {
  let c = ChartModel::from_spec("r4", &[("x", Flat), ("y1", Flat), ("y2", Periodic), ("y3", Flat)]).unwrap();
  let s = PfaffianSystem::new(&c, vec![form(&c, "dy1"), form(&c, "dy2"), form(&c, "dy3 - y1*dy1")]).unwrap();
  let a = ActionSpec::new(
    LieAlgebraSpec::abelian(3),
    vec![field(&c, "d/dy1 + y1*d/dy3"), field(&c, "d/dy2"), field(&c, "d/dy3")],
    s,
  )
  .unwrap();
  assert!(a.check_action().unwrap().all_hold());
  let b = a.cartan_basis().unwrap();
  assert!(b.forms.iter().all(|w| w.d().is_zero()));
}

#[test]
fn symmetries_split_along_the_action() {
  let a = plane_action();
  let c = a.chart().clone();
  let d = a.lemma2_decomposition(&field(&c, "d/dy + x*d/dx")).unwrap();
  assert_eq!(d.coefficients, vec![ScalarExpr::one(&c)]);
  assert_eq!(d.remainder, field(&c, "x*d/dx"));
  assert!(d.violation.is_none() && d.remainder_tangent);
  let d = a.lemma2_decomposition(&a.fields[0]).unwrap();
  assert!(d.remainder.is_zero());
  let d = a.lemma2_decomposition(&field(&c, "y*d/dy + d/dx")).unwrap();
  assert_eq!(d.coefficients, vec![parse_scalar(&c, "y").unwrap()]);
  assert_eq!(d.remainder, field(&c, "d/dx"));
  assert!(a.lemma2_decomposition(&field(&c, "x*d/dy")).is_err());
}
