//! The `.pfk` text format: charts, bindings and commands.

mod ast;
mod corpus;
mod eval;
mod lexer;
mod parser;
mod run;
mod session;

use std::fmt;
use std::sync::Arc;

pub use ast::{Expr, Pos};
pub use corpus::{fixture, CORPUS};
pub use eval::{eval, Bindings, Value};
pub use run::{run, RunOptions, RunReport, SCHEMA};
pub use session::{parse, Command, ComplexKind, Env, ModuleDef, SessionSpec, Statement};

use crate::cartan_calculus::{DifferentialForm, VectorField};
use crate::scalars::{ChartModel, ScalarExpr};

/// A positioned parse, binding or evaluation error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
  pub line: usize,
  pub col: usize,
  pub message: String,
  /// Tokens that would have been accepted at this position, if known.
  pub expected: Vec<String>,
}

impl Diagnostic {
  pub fn new(line: usize, col: usize, message: String, expected: Vec<String>) -> Self { Self { line, col, message, expected } }
}

impl fmt::Display for Diagnostic {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
    if !self.expected.is_empty() {
      write!(f, " (expected one of: {})", self.expected.join(", "))?;
    }
    Ok(())
  }
}

impl std::error::Error for Diagnostic {}

/// Parses a single expression spanning the whole input.
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
  let mut p = parser::Parser::new(lexer::lex(src)?);
  let e = p.expr()?;
  p.eat(&lexer::Tok::Newline);
  if !p.at_end() {
    return Err(p.unexpected(&["operator", "end of input"]));
  }
  Ok(e)
}

fn parse_value(chart: &Arc<ChartModel>, src: &str) -> Result<Value, Diagnostic> {
  eval(chart, &Bindings::new(), &parse_expr(src)?)
}

fn wrong(kind: &str, v: &Value) -> Diagnostic { Diagnostic::new(1, 1, format!("expected a {kind}, found a {}", v.kind()), vec![]) }

pub fn parse_scalar(chart: &Arc<ChartModel>, src: &str) -> Result<ScalarExpr, Diagnostic> {
  match parse_value(chart, src)? {
    Value::Scalar(s) => Ok(s),
    v => Err(wrong("scalar", &v)),
  }
}

/// Parses a form; a bare scalar is read as a 0-form.
pub fn parse_form(chart: &Arc<ChartModel>, src: &str) -> Result<DifferentialForm, Diagnostic> {
  match parse_value(chart, src)? {
    Value::Scalar(s) => Ok(DifferentialForm::scalar(s)),
    Value::Form(f) => Ok(f),
    v => Err(wrong("form", &v)),
  }
}

/// Parses a vector field; `0` is the zero field.
pub fn parse_field(chart: &Arc<ChartModel>, src: &str) -> Result<VectorField, Diagnostic> {
  match parse_value(chart, src)? {
    Value::Field(v) => Ok(v),
    Value::Scalar(s) if s.is_zero() => Ok(VectorField::zero(chart)),
    v => Err(wrong("field", &v)),
  }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalars::CoordKind::{Flat, Periodic};

  fn cyl() -> Arc<ChartModel> { ChartModel::from_spec("cyl", &[("x", Periodic), ("y", Flat)]).unwrap() }

  #[test]
  fn scalars_round_trip() {
    let c = cyl();
    for src in ["cos(x)*cos(x)", "y^2*sin(2*x) - 3/4", "(y + 1)^3", "sin(x)^2 + cos(x)^2"] {
      let e = parse_scalar(&c, src).unwrap();
      assert_eq!(parse_scalar(&c, &e.to_string()).unwrap(), e, "{src} -> {e}");
    }
    assert!(parse_scalar(&c, "sin(x)^2 + cos(x)^2 - 1").unwrap().is_zero());
  }

  #[test]
  fn forms_and_fields() {
    let c = cyl();
    let w = parse_form(&c, "y^2*dx + cos(x)*dy ∧ dx").unwrap_err();
    assert!(w.message.contains("degrees"));
    let w = parse_form(&c, "(y^2 + 1)*dx /\\ dy - d(y*sin(x))").unwrap_err();
    assert!(w.message.contains("degrees"));
    let w = parse_form(&c, "(y^2 + 1)*dx /\\ dy + d(y*sin(x)) ∧ dy").unwrap();
    assert_eq!(w.to_string(), "(cos(x)*y + y^2 + 1)*dx∧dy");
    assert_eq!(parse_form(&c, &w.to_string()).unwrap(), w);
    let v = parse_field(&c, "y*d/dx - 2*d/dy").unwrap();
    assert_eq!(v.to_string(), "y*d/dx - 2*d/dy");
    assert!(parse_field(&c, "x*d/dy").is_err());
  }

  #[test]
  fn dangling_wedge_is_reported_at_the_wedge() {
    let c = cyl();
    let d = parse_form(&c, "dx ∧").unwrap_err();
    assert_eq!((d.line, d.col), (1, 4));
    assert!(d.expected.iter().any(|e| e == "identifier"));
  }
}
