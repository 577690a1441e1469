//! The exterior Frobenius test on a few Pfaffian systems.

use pfaffkit::cli::parse_form;
use pfaffkit::pfaffian::PfaffianSystem;
use pfaffkit::scalars::{ChartModel, CoordKind};

fn check(chart: &std::sync::Arc<pfaffkit::scalars::ChartModel>, gens: &[&str]) -> Result<(), Box<dyn std::error::Error>> {
  let forms = gens.iter().map(|g| parse_form(chart, g)).collect::<Result<Vec<_>, _>>()?;
  let s = PfaffianSystem::new(chart, forms)?;
  match s.integrability_witness() {
    None => println!("<{}>: integrable", gens.join(", ")),
    Some((k, w)) => println!("<{}>: not integrable, generator {k} gives {w}", gens.join(", ")),
  }
  Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
  use CoordKind::*;
  let r3 = ChartModel::from_spec("r3", &[("x", Flat), ("y", Flat), ("z", Flat)])?;
  check(&r3, &["dz - y*dx"])?;
  check(&r3, &["dy"])?;
  check(&r3, &["x*dx + y*dy + z*dz"])?;
  check(&r3, &["y*dz - z*dy", "z*dx - x*dz"])?;

  // orbits of t d/dt + d/dtheta on the cylinder
  let cyl = ChartModel::from_spec("cyl", &[("t", Flat), ("theta", Periodic)])?;
  check(&cyl, &["dt - t*dtheta"])?;
  Ok(())
}
