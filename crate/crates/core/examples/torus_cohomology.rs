//! Vertical cohomology of the circle foliation of the torus and its
//! comparison with Lie algebra cohomology, across a truncation ladder.

use pfaffkit::cli::parse_field;
use pfaffkit::cohomology::{theorem1_compare, theorem1_compare_with, vertical_cohomology, xi0_module};
use pfaffkit::group_action::LieAlgebraSpec;
use pfaffkit::scalars::{ChartModel, CoordKind};
use pfaffkit::variational::{FoliatedModel, Truncation};
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
  let chart = ChartModel::from_spec("torus", &[("x", CoordKind::Periodic), ("y", CoordKind::Periodic)])?;
  let model = FoliatedModel::new(&chart, &["x"], &["y"])?
    .with_action(LieAlgebraSpec::abelian(1), vec![parse_field(&chart, "d/dy")?])?;

  for d in [3, 5] {
    for k in [3, 5, 8] {
      let t = Truncation::new(d, k);
      let r = vertical_cohomology(&model, t)?;
      let cmp = theorem1_compare(&model, t)?;
      println!("{t}: H^1 = {:?}, witnesses {:?}, comparison {:?}", r.dims, r.witnesses, cmp.verdict);
    }
  }

  let t = Truncation::new(3, 3);
  let bad = xi0_module(&model, t)?.shifted(0, BigRational::from_integer(1.into()));
  let cmp = theorem1_compare_with(&model, t, &bad)?;
  println!("with rho(e1) + Id: {:?} {:?}", cmp.verdict, cmp.degrees);
  Ok(())
}
