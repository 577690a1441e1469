//! Exterior derivative, interior product, Lie derivative and the
//! Frolicher-Nijenhuis derivation of a vector-valued 1-form.

use pfaffkit::cartan_calculus::VectorValuedOneForm;
use pfaffkit::cli::{parse_field, parse_form};
use pfaffkit::scalars::{ChartModel, CoordKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
  let chart = ChartModel::from_spec(
    "m",
    &[("x", CoordKind::Flat), ("y", CoordKind::Flat), ("t", CoordKind::Periodic)],
  )?;
  let w = parse_form(&chart, "x*y*dx + sin(t)*dy")?;
  let xi = parse_field(&chart, "y*d/dx + d/dt")?;
  println!("w = {w}");
  println!("dw = {}", w.d());
  println!("d(dw) = {}", w.d().d());

  let lie = w.lie_derivative(&xi)?;
  let cartan = w.interior(&xi)?.d().try_add(&w.d().interior(&xi)?)?;
  println!("L_xi w = {lie}");
  println!("i_xi dw + d i_xi w = {cartan}");
  assert_eq!(lie, cartan);

  let id = VectorValuedOneForm::identity(&chart);
  println!("d_Id w = {} (equals dw: {})", w.fn_derivation(&id)?, w.fn_derivation(&id)? == w.d());
  Ok(())
}
