//! Ranks, kernels and cohomology dimensions over the rationals.

use pfaffkit::exact_linalg::{cohomology_dim, RationalMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
  // de Rham complex of a triangle boundary: 3 vertices, 3 edges
  let d0 = RationalMatrix::from_int_rows(&[vec![-1, 1, 0], vec![0, -1, 1], vec![1, 0, -1]]);
  let none_in = RationalMatrix::zeros(3, 0);
  let none_out = RationalMatrix::zeros(0, 3);
  println!("rank d0 = {}", d0.rank());
  println!("kernel of d0 = {:?}", d0.kernel_basis().iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>());
  println!("H^0 = {}", cohomology_dim(&none_in, &d0)?);
  println!("H^1 = {}", cohomology_dim(&d0, &none_out)?);

  let m = RationalMatrix::from_int_rows(&[vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 1]]);
  println!("rank of a singular 3x3 matrix = {}", m.rank());
  Ok(())
}
