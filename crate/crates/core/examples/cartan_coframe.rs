//! The invariant coframe of a transversally free action of the affine algebra
//! `[e1, e2] = e1` and its structure equation.

use pfaffkit::cli::{parse_field, parse_form, parse_scalar};
use pfaffkit::group_action::{ActionSpec, LieAlgebraSpec, SignConvention};
use pfaffkit::pfaffian::PfaffianSystem;
use pfaffkit::scalars::{ChartModel, CoordKind};
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
  use CoordKind::*;
  let base = ChartModel::from_spec("aff", &[("x", Periodic), ("u", Flat), ("v", Flat)])?;
  let chart = base.localize(&[parse_scalar(&base, "v")?])?;
  let g = LieAlgebraSpec::new(vec!["e1".into(), "e2".into()], &[(0, 1, vec![(0, BigRational::from_integer(1.into()))])])?;
  let fields = vec![parse_field(&chart, "d/du")?, parse_field(&chart, "u*d/du + v*d/dv")?];
  let system = PfaffianSystem::new(&chart, vec![parse_form(&chart, "du")?, parse_form(&chart, "dv")?])?;
  let action = ActionSpec::new(g.clone(), fields, system)?;

  println!("action checks: {:?}", action.check_action()?);
  println!("transversally free: {}", action.check_transversally_free().holds());
  let basis = action.cartan_basis()?;
  for (i, w) in basis.forms.iter().enumerate() {
    println!("omega{} = {w}    d omega{} = {}", i + 1, i + 1, w.d());
  }
  let rhs = basis.structure_rhs(&g, 0, SignConvention::Negated)?;
  println!("-omega1 ^ omega2 = {rhs}");
  println!("structure equation holds: {}", basis.verify_structure_equation(&g, SignConvention::Negated)?);
  Ok(())
}
