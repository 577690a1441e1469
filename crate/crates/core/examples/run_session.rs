//! Parses a session in the text format, prints it back, and runs it.
//!
//! `cargo run --example run_session [file.pfk]`; without a file the bundled
//! torus fixture is used.

use pfaffkit::cli::{fixture, parse, run, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
  let src = match std::env::args().nth(1) {
    Some(path) => std::fs::read_to_string(path)?,
    None => fixture("torus.pfk").expect("bundled fixture").to_string(),
  };
  let spec = parse(&src)?;
  print!("{spec}");
  let report = run(&spec, RunOptions::default());
  for line in &report.summary {
    println!("{line}");
  }
  print!("{}", report.to_json_string());
  std::process::exit(report.exit_code(false));
}
