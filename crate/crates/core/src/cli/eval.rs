use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use super::ast::{Expr, Pos};
use super::Diagnostic;
use crate::error::Error;
use crate::cartan_calculus::{DifferentialForm, VectorField};
use crate::scalars::{normalize, ChartModel, CoordKind, RawScalar, ScalarExpr};

/// A typed value produced by an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
  Scalar(ScalarExpr),
  Form(DifferentialForm),
  Field(VectorField),
}

impl Value {
  pub fn kind(&self) -> &'static str {
    match self {
      Value::Scalar(_) => "scalar",
      Value::Form(_) => "form",
      Value::Field(_) => "field",
    }
  }

  fn into_form(self) -> Option<DifferentialForm> {
    match self {
      Value::Scalar(s) => Some(DifferentialForm::scalar(s)),
      Value::Form(f) => Some(f),
      Value::Field(_) => None,
    }
  }
}

/// Name bindings visible to expressions.
pub type Bindings = BTreeMap<String, Value>;

fn err(p: Pos, msg: impl Into<String>) -> Diagnostic { Diagnostic::new(p.line, p.col, msg.into(), vec![]) }

fn engine(p: Pos, e: Error) -> Diagnostic { err(p, e.to_string()) }

/// Evaluates an expression on `chart` with the given bindings.
pub fn eval(chart: &Arc<ChartModel>, env: &Bindings, e: &Expr) -> Result<Value, Diagnostic> {
  let p = e.pos();
  Ok(match e {
    Expr::Int(v, _) => Value::Scalar(ScalarExpr::constant(chart, BigRational::from_integer(v.clone()))),
    Expr::Name(n, _) => resolve(chart, env, n, p)?,
    Expr::Partial(n, _) => Value::Field(VectorField::coordinate(chart, n).map_err(|e| engine(p, e))?),
    Expr::Neg(a, _) => match eval(chart, env, a)? {
      Value::Scalar(s) => Value::Scalar(-s),
      Value::Form(f) => Value::Form(f.neg()),
      Value::Field(v) => Value::Field(v.neg()),
    },
    Expr::Add(a, b, _) | Expr::Sub(a, b, _) => {
      let sub = matches!(e, Expr::Sub(..));
      let (x, y) = (eval(chart, env, a)?, eval(chart, env, b)?);
      match (x, y) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x - y } else { x + y }),
        (Value::Field(x), Value::Field(y)) => {
          Value::Field(if sub { x.try_sub(&y) } else { x.try_add(&y) }.map_err(|e| engine(p, e))?)
        },
        (x, y) => {
          let (kx, ky) = (x.kind(), y.kind());
          match (x.into_form(), y.into_form()) {
            (Some(x), Some(y)) => {
              Value::Form(if sub { x.try_sub(&y) } else { x.try_add(&y) }.map_err(|e| engine(p, e))?)
            },
            _ => return Err(err(p, format!("cannot add a {kx} and a {ky}"))),
          }
        },
      }
    },
    Expr::Mul(a, b, _) => {
      let (x, y) = (eval(chart, env, a)?, eval(chart, env, b)?);
      match (x, y) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
        (Value::Scalar(s), Value::Field(v)) | (Value::Field(v), Value::Scalar(s)) => {
          Value::Field(v.scale(&s).map_err(|e| engine(p, e))?)
        },
        (Value::Scalar(s), Value::Form(f)) | (Value::Form(f), Value::Scalar(s)) => {
          Value::Form(f.scale(&s).map_err(|e| engine(p, e))?)
        },
        (x, y) => return Err(err(p, format!("cannot multiply a {} by a {}; use ∧ for forms", x.kind(), y.kind()))),
      }
    },
    Expr::Div(a, b, _) => {
      let x = eval(chart, env, a)?;
      let y = match eval(chart, env, b)? {
        Value::Scalar(s) => s.try_inverse().map_err(|e| engine(b.pos(), e))?,
        other => return Err(err(b.pos(), format!("cannot divide by a {}", other.kind()))),
      };
      match x {
        Value::Scalar(x) => Value::Scalar(x * y),
        Value::Form(f) => Value::Form(f.scale(&y).map_err(|e| engine(p, e))?),
        Value::Field(v) => Value::Field(v.scale(&y).map_err(|e| engine(p, e))?),
      }
    },
    Expr::Wedge(a, b, _) => {
      let (x, y) = (eval(chart, env, a)?, eval(chart, env, b)?);
      match (x.into_form(), y.into_form()) {
        (Some(x), Some(y)) => Value::Form(x.wedge(&y).map_err(|e| engine(p, e))?),
        _ => return Err(err(p, "∧ applies to forms only")),
      }
    },
    Expr::Pow(a, k, _) => match eval(chart, env, a)? {
      Value::Scalar(s) => Value::Scalar(s.pow(*k)),
      other => return Err(err(p, format!("cannot raise a {} to a power", other.kind()))),
    },
    Expr::Call(f, args, _) => call(chart, env, f, args, p)?,
  })
}

fn resolve(chart: &Arc<ChartModel>, env: &Bindings, n: &str, p: Pos) -> Result<Value, Diagnostic> {
  if let Some(v) = env.get(n) {
    return Ok(v.clone());
  }
  if let Ok(i) = chart.index_of(n) {
    return match chart.kind(i) {
      CoordKind::Flat => Ok(Value::Scalar(ScalarExpr::coordinate(chart, n).map_err(|e| engine(p, e))?)),
      CoordKind::Periodic => Err(err(p, format!("periodic coordinate `{n}` may only appear inside sin/cos"))),
    };
  }
  if let Some(rest) = n.strip_prefix('d') {
    if let Ok(i) = chart.index_of(rest) {
      return Ok(Value::Form(DifferentialForm::coordinate_differential(chart, i)));
    }
  }
  Err(err(p, format!("unknown name `{n}`")))
}

fn call(chart: &Arc<ChartModel>, env: &Bindings, f: &str, args: &[Expr], p: Pos) -> Result<Value, Diagnostic> {
  if args.len() != 1 {
    return Err(err(p, format!("`{f}` takes one argument")));
  }
  match f {
    "sin" | "cos" => {
      let raw = to_raw(&args[0])?;
      let wrapped = if f == "sin" { RawScalar::Sin(Box::new(raw)) } else { RawScalar::Cos(Box::new(raw)) };
      Ok(Value::Scalar(normalize(chart, &wrapped).map_err(|e| engine(args[0].pos(), e))?))
    },
    "d" => match eval(chart, env, &args[0])?.into_form() {
      Some(w) => Ok(Value::Form(w.d())),
      None => Err(err(p, "d applies to scalars and forms")),
    },
    _ => Err(err(p, format!("unknown function `{f}`; expected sin, cos or d"))),
  }
}

/// Angle arguments are integer combinations of periodic coordinates.
fn to_raw(e: &Expr) -> Result<RawScalar, Diagnostic> {
  Ok(match e {
    Expr::Int(v, _) => RawScalar::Num(BigRational::from_integer(v.clone())),
    Expr::Name(n, _) => RawScalar::Coord(n.clone()),
    Expr::Neg(a, _) => RawScalar::Neg(Box::new(to_raw(a)?)),
    Expr::Add(a, b, _) => RawScalar::Add(vec![to_raw(a)?, to_raw(b)?]),
    Expr::Sub(a, b, _) => RawScalar::Add(vec![to_raw(a)?, RawScalar::Neg(Box::new(to_raw(b)?))]),
    Expr::Mul(a, b, _) => RawScalar::Mul(vec![to_raw(a)?, to_raw(b)?]),
    other => return Err(err(other.pos(), "angle must be an integer combination of periodic coordinates")),
  })
}
