use super::*;
use crate::cli::{parse_field, parse_form, parse_scalar};
use crate::scalars::CoordKind::{Flat, Periodic};

fn r2() -> Arc<ChartModel> { ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)]).unwrap() }

fn r3() -> Arc<ChartModel> { ChartModel::from_spec("r3", &[("x", Flat), ("y", Flat), ("z", Flat)]).unwrap() }

fn punctured_r3() -> Arc<ChartModel> {
  let c = r3();
  let rho = parse_scalar(&c, "x^2 + y^2 + z^2").unwrap();
  c.localize(&[rho]).unwrap()
}

fn sys(c: &Arc<ChartModel>, gens: &[&str]) -> PfaffianSystem {
  PfaffianSystem::new(c, gens.iter().map(|g| parse_form(c, g).unwrap()).collect()).unwrap()
}

fn field(c: &Arc<ChartModel>, s: &str) -> VectorField { parse_field(c, s).unwrap() }

#[test]
fn annihilators() {
  let c = r2();
  assert_eq!(sys(&c, &["dy"]).annihilator().fields(), &[field(&c, "d/dx")]);
  let c = r3();
  let contact = sys(&c, &["dz - y*dx"]);
  let ann = contact.annihilator();
  assert_eq!(ann.fields(), &[field(&c, "d/dx + y*d/dz"), field(&c, "d/dy")]);
  let c = punctured_r3();
  let sphere = sys(&c, &["x*dx + y*dy + z*dz"]);
  let ann = sphere.annihilator();
  assert_eq!(ann.rank(), 2);
  for eta in ann.fields() {
    assert!(sphere.generators()[0].pair(eta).unwrap().is_zero());
  }
}

#[test]
fn dependent_generators_are_degenerate() {
  let c = r2();
  let g = vec![parse_form(&c, "x*dy").unwrap(), parse_form(&c, "x^2*dy").unwrap()];
  assert!(matches!(PfaffianSystem::new(&c, g), Err(Error::DegenerateSystem(_))));
}

#[test]
fn frobenius() {
  let c = r3();
  let contact = sys(&c, &["dz - y*dx"]);
  assert!(!contact.is_integrable());
  assert_eq!(contact.integrability_witness().unwrap().1, parse_form(&c, "dx∧dy∧dz").unwrap());
  assert!(sys(&r2(), &["dy"]).is_integrable());
  assert!(sys(&punctured_r3(), &["x*dx + y*dy + z*dz"]).is_integrable());
  // the rays through the origin: annihilator of the radial field
  let c = punctured_r3();
  let rays = sys(&c, &["y*dx - x*dy", "z*dx - x*dz"]);
  assert!(rays.is_integrable());
}

#[test]
fn attractor_foliation_is_integrable() {
  let c = ChartModel::from_spec("cyl", &[("t", Flat), ("theta", Periodic)]).unwrap();
  let xi = field(&c, "t*d/dt + d/dtheta");
  let dist = Distribution::new(&c, vec![xi.clone()]).unwrap();
  let forms = dist.annihilating_forms();
  assert_eq!(forms, vec![parse_form(&c, "dt - t*dtheta").unwrap()]);
  let s = PfaffianSystem::new(&c, forms).unwrap();
  assert!(s.is_integrable());
  assert!(s.is_symmetry(&xi).unwrap());
}

#[test]
fn invariant_forms() {
  let c = r2();
  let s = sys(&c, &["dy"]);
  assert!(s.is_invariant_form(&parse_form(&c, "dy").unwrap()).unwrap());
  assert!(!s.is_invariant_form(&parse_form(&c, "x*dy").unwrap()).unwrap());
  assert!(s.is_invariant_form(&parse_form(&c, "(y^3 - 2*y)*dy").unwrap()).unwrap());
}

#[test]
fn invariant_forms_are_a_differential_algebra() {
  let c = punctured_r3();
  let s = sys(&c, &["x*dx + y*dy + z*dz"]);
  let w = parse_form(&c, "(x^2 + y^2 + z^2)*(x*dx + y*dy + z*dz)").unwrap();
  assert!(s.is_invariant_form(&w).unwrap());
  assert!(s.is_invariant_form(&w.d()).unwrap());
  let f = parse_scalar(&c, "(x^2 + y^2 + z^2)^2 + 3").unwrap();
  assert!(s.is_first_integral(&f).unwrap());
  assert!(s.is_invariant_form(&w.scale(&f).unwrap()).unwrap());
  let xi = field(&c, "x*d/dx + y*d/dy + z*d/dz");
  assert!(s.is_symmetry(&xi).unwrap());
  assert!(s.is_invariant_form(&w.lie_derivative(&xi).unwrap()).unwrap());
}

#[test]
fn first_integrals() {
  let c = r2();
  let s = sys(&c, &["dy"]);
  assert!(s.is_first_integral(&parse_scalar(&c, "y").unwrap()).unwrap());
  assert!(!s.is_first_integral(&parse_scalar(&c, "x").unwrap()).unwrap());
  let c = punctured_r3();
  let s = sys(&c, &["x*dx + y*dy + z*dz"]);
  assert!(s.is_first_integral(&parse_scalar(&c, "x^2 + y^2 + z^2").unwrap()).unwrap());
}

#[test]
fn symmetries() {
  let c = r2();
  let s = sys(&c, &["dy"]);
  assert!(s.is_symmetry(&field(&c, "d/dx")).unwrap());
  assert!(s.is_symmetry(&field(&c, "d/dy")).unwrap());
  let t = sys(&c, &["dy - dx"]);
  assert!(!t.is_symmetry(&field(&c, "y*d/dx")).unwrap());
}

#[test]
fn tangent_fields_are_symmetries_of_integrable_systems() {
  let c = punctured_r3();
  let s = sys(&c, &["x*dx + y*dy + z*dz"]);
  for eta in s.annihilator().fields() {
    let f = parse_scalar(&c, "x*y + z^3").unwrap();
    assert!(s.is_symmetry(&eta.scale(&f).unwrap()).unwrap());
  }
}

#[test]
fn splittings() {
  let c = r2();
  let sp = make_splitting(&c, &[field(&c, "d/dy")], &[field(&c, "d/dx")]).unwrap();
  let vy = VectorValuedOneForm::outer(&field(&c, "d/dy"), &parse_form(&c, "dy").unwrap()).unwrap();
  let hx = VectorValuedOneForm::outer(&field(&c, "d/dx"), &parse_form(&c, "dx").unwrap()).unwrap();
  assert_eq!((sp.v.clone(), sp.h.clone()), (vy, hx));
  assert!(sp.projection_identities_hold().unwrap());

  let uv = ChartModel::from_spec("uv", &[("u", Flat), ("v", Flat)]).unwrap();
  let uv = uv.localize(&[parse_scalar(&uv, "v").unwrap()]).unwrap();
  let sp = make_splitting(&uv, &[field(&uv, "d/du"), field(&uv, "u*d/du + v*d/dv")], &[]).unwrap();
  assert_eq!(sp.v, VectorValuedOneForm::identity(&uv));
  assert!(sp.h.is_zero());

  let sp = make_splitting(&c, &[field(&c, "d/dy + x*d/dx")], &[field(&c, "d/dx")]).unwrap();
  let h = VectorValuedOneForm::outer(&field(&c, "d/dx"), &parse_form(&c, "dx - x*dy").unwrap()).unwrap();
  let v = VectorValuedOneForm::outer(&field(&c, "d/dy + x*d/dx"), &parse_form(&c, "dy").unwrap()).unwrap();
  assert_eq!((sp.v.clone(), sp.h.clone()), (v, h));
  assert!(sp.projection_identities_hold().unwrap());
}

#[test]
fn splitting_errors() {
  let c = r2();
  let e = make_splitting(&c, &[field(&c, "d/dx")], &[field(&c, "y*d/dx")]).unwrap_err();
  assert!(matches!(e, Error::NotComplementary(_)));
  let e = make_splitting(&c, &[field(&c, "x*d/dy")], &[field(&c, "d/dx")]).unwrap_err();
  assert_eq!(e, Error::LocalizationNeeded { what: "splitting projections".into(), denominator: "-x".into() });
}

#[test]
fn dual_horizontal_bases() {
  let c = r2();
  let s = sys(&c, &["dy - (x*y + 1)*dx"]);
  let b = s.dual_horizontal_basis(&["x"]).unwrap();
  assert_eq!(b.fields, vec![field(&c, "d/dx + (x*y + 1)*d/dy")]);
  assert_eq!(sys(&c, &["dy"]).dual_horizontal_basis(&["x"]).unwrap().fields, vec![field(&c, "d/dx")]);
  let c = r3();
  let contact = sys(&c, &["dz - y*dx"]);
  let b = contact.dual_horizontal_basis(&["x", "y"]).unwrap();
  assert_eq!(b.fields.len(), 2);
  assert!(!b.commuting);
  let flat = sys(&c, &["dz"]);
  assert!(flat.dual_horizontal_basis(&["x", "y"]).unwrap().commuting);
  assert!(matches!(flat.dual_horizontal_basis(&["x", "z"]), Err(Error::NotTransverse(_))));
}

#[test]
fn distribution_involutivity() {
  let c = r3();
  let d = Distribution::new(&c, vec![field(&c, "d/dx + y*d/dz"), field(&c, "d/dy")]).unwrap();
  assert!(!d.is_involutive().unwrap());
  let d = Distribution::new(&c, vec![field(&c, "d/dx"), field(&c, "d/dy + x*d/dx")]).unwrap();
  assert!(d.is_involutive().unwrap());
}
