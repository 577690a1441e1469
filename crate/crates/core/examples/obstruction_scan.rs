//! When the variational H^1 vanishes, any 1-dimensional algebra acting on a
//! module with nonzero H^1 cannot act transversally freely.

use num_rational::BigRational;
use pfaffkit::cli::parse_field;
use pfaffkit::cohomology::{obstruction_scan, vertical_cohomology, CEModule, Candidate};
use pfaffkit::exact_linalg::RationalMatrix;
use pfaffkit::group_action::LieAlgebraSpec;
use pfaffkit::scalars::{ChartModel, CoordKind};
use pfaffkit::variational::{FoliatedModel, Truncation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
  let chart = ChartModel::from_spec("cyl", &[("x", CoordKind::Periodic), ("y", CoordKind::Flat)])?;
  let model = FoliatedModel::new(&chart, &["x"], &["y"])?
    .with_action(LieAlgebraSpec::abelian(1), vec![parse_field(&chart, "d/dy")?])?;
  let variational = vertical_cohomology(&model, Truncation::new(5, 3))?;
  println!("variational cohomology: {:?}", variational.dims);

  // d/dy on span{1, cos y, sin y}
  let rho = RationalMatrix::from_int_rows(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, -1, 0]]);
  let mut unit = RationalMatrix::zeros(1, 1);
  unit.set(0, 0, BigRational::from_integer(1.into()));
  let g = LieAlgebraSpec::abelian(1);
  let candidates = vec![
    Candidate { name: "fourier".into(), module: CEModule::new(g.clone(), 3, vec![rho])? },
    Candidate { name: "scaling".into(), module: CEModule::new(g, 1, vec![unit])? },
  ];
  for v in obstruction_scan(&variational, &candidates)? {
    println!("{}: {} (CE dims {:?})", v.candidate, v.verdict, v.ce_dims);
  }
  Ok(())
}
