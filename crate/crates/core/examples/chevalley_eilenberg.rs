//! Lie algebra cohomology of abelian algebras and of sl2.

use pfaffkit::cohomology::{ce_complex, CEModule};
use pfaffkit::group_action::LieAlgebraSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
  for q in 1..=4 {
    let c = ce_complex(&CEModule::trivial(LieAlgebraSpec::abelian(q), 1))?;
    println!("abelian({q}): dims {:?}, cohomology {:?}", c.dims, c.cohomology()?);
  }
  let c = ce_complex(&CEModule::trivial(LieAlgebraSpec::sl2(), 1))?;
  println!("sl2: dims {:?}, cohomology {:?}", c.dims, c.cohomology()?);
  Ok(())
}
