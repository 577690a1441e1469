//! Bigraded forms on a foliated chart: the horizontal differential, horizontal
//! primitives, the quotient classes and the Euler operator.

use pfaffkit::cli::{parse_field, parse_form};
use pfaffkit::group_action::LieAlgebraSpec;
use pfaffkit::scalars::{ChartModel, CoordKind};
use pfaffkit::variational::{euler, horizontal_primitive, BigradedForm, FoliatedModel, XiClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
  use CoordKind::*;
  // circles y = const on the cylinder, moved by d/dy
  let chart = ChartModel::from_spec("cyl", &[("x", Periodic), ("y", Flat)])?;
  let model = FoliatedModel::new(&chart, &["x"], &["y"])?
    .with_action(LieAlgebraSpec::abelian(1), vec![parse_field(&chart, "d/dy")?])?;

  let w = parse_form(&chart, "y^2*cos(x)*dy + y*sin(x)*dx")?;
  for part in BigradedForm::decompose(&model, &w.d())? {
    println!("bidegree {:?}: {}", part.bidegree(), part);
  }

  let top = BigradedForm::component(&model, &parse_form(&chart, "(y^2 + y^2*sin(x))*dx")?, 0)?;
  let prim = horizontal_primitive(&top)?;
  println!("primitive of {top}: {} with obstruction {}", prim.primitive, prim.obstruction);

  let class = XiClass::project(&top)?;
  println!("class in Xi^0: {class}");
  println!("Euler operator: {}", euler(&top)?);
  println!("d_V of the class: {}", class.d_v()?);
  Ok(())
}
