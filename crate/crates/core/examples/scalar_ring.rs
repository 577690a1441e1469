//! Exact arithmetic in the coefficient ring: polynomials in flat coordinates,
//! Fourier polynomials in periodic ones, and declared denominators.

use pfaffkit::cli::parse_scalar;
use pfaffkit::scalars::{ChartModel, CoordKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
  let chart = ChartModel::from_spec("strip", &[("x", CoordKind::Periodic), ("v", CoordKind::Flat)])?;
  let f = parse_scalar(&chart, "sin(x)^2 + cos(x)^2")?;
  println!("sin(x)^2 + cos(x)^2 = {f}");

  let g = parse_scalar(&chart, "v^2*cos(3*x) - 1/2")?;
  println!("g = {g}");
  println!("dg/dx = {}", g.partial("x")?);
  println!("dg/dv = {}", g.partial("v")?);

  let local = chart.localize(&[parse_scalar(&chart, "v")?])?;
  let inv = parse_scalar(&local, "1/v")?;
  let prod = inv.try_mul(&parse_scalar(&local, "v^2")?)?;
  println!("(1/v) * v^2 = {prod}");
  println!("on {local}: d(1/v)/dv = {}", inv.partial("v")?);
  Ok(())
}
