//! Sessions: one chart, named bindings, and a list of commands.
//!
//! ```text
//! chart torus(x: periodic, y: periodic)
//! system S = <dy>
//! algebra g = {e1}
//! action phi = g on S by [d/dy]
//! truncate degree 3 freq 5
//! cohomology vertical phi
//! compare-theorem1 phi
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ast::{Expr, Pos};
use super::eval::{eval, Bindings, Value};
use super::lexer::{lex, Tok};
use super::parser::Parser;
use super::Diagnostic;
use crate::cartan_calculus::{DifferentialForm, VectorField};
use crate::exact_linalg::RationalMatrix;
use crate::group_action::{ActionSpec, LieAlgebraSpec};
use crate::pfaffian::PfaffianSystem;
use crate::scalars::{ChartModel, CoordKind, Coordinate, ScalarExpr};
use crate::variational::Truncation;

/// The complexes reachable from `cohomology`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
  Vertical,
  Invariant,
  Equivariant,
  Ce,
}

impl ComplexKind {
  pub fn keyword(self) -> &'static str {
    match self {
      ComplexKind::Vertical => "vertical",
      ComplexKind::Invariant => "invariant",
      ComplexKind::Equivariant => "equivariant",
      ComplexKind::Ce => "ce",
    }
  }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
  CheckIntegrable(String),
  CheckInvariant(String, DifferentialForm),
  CheckAction(String),
  CartanBasis(String),
  Cohomology(ComplexKind, String),
  Euler(String, DifferentialForm),
  /// The action, and optionally a module replacing the truncated `Ξ^0`.
  CompareTheorem1(String, Option<String>),
  ScanObstructions(String, Vec<String>),
  /// A system or an action, and the form to test.
  RelativeInvariance(String, DifferentialForm),
}

impl Command {
  pub fn name(&self) -> &'static str {
    match self {
      Command::CheckIntegrable(_) => "check-integrable",
      Command::CheckInvariant(..) => "check-invariant",
      Command::CheckAction(_) => "check-action",
      Command::CartanBasis(_) => "cartan-basis",
      Command::Cohomology(..) => "cohomology",
      Command::Euler(..) => "euler",
      Command::CompareTheorem1(..) => "compare-theorem1",
      Command::ScanObstructions(..) => "scan-obstructions",
      Command::RelativeInvariance(..) => "relative-invariance",
    }
  }
}

impl fmt::Display for Command {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}", self.name())?;
    match self {
      Command::CheckIntegrable(s) | Command::CheckAction(s) | Command::CartanBasis(s) => write!(f, " {s}"),
      Command::CheckInvariant(s, w) | Command::Euler(s, w) | Command::RelativeInvariance(s, w) => write!(f, " {s} {w}"),
      Command::Cohomology(k, s) => write!(f, " {} {s}", k.keyword()),
      Command::CompareTheorem1(a, m) => {
        write!(f, " {a}")?;
        match m {
          Some(m) => write!(f, " with {m}"),
          None => Ok(()),
        }
      },
      Command::ScanObstructions(a, ms) => write!(f, " {a} against [{}]", ms.join(", ")),
    }
  }
}

/// How a module is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum ModuleDef {
  /// `ρ(e_i)` given as matrices; generators not listed act by zero.
  Explicit { algebra: String, dim: usize, rho: Vec<(usize, RationalMatrix)> },
  /// The truncated `Ξ^0` of an action, optionally with `ρ(e_i) + c·Id`.
  Xi0 { action: String, shift: Option<(usize, BigRational)> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
  Scalar(String, ScalarExpr),
  Form(String, DifferentialForm),
  Field(String, VectorField),
  System(String, Vec<DifferentialForm>),
  Algebra(String, LieAlgebraSpec),
  Action { name: String, algebra: String, system: String, fields: Vec<VectorField> },
  Module(String, ModuleDef),
  Truncate(Truncation),
  Command(Command),
}

/// Everything bound so far, by name.
#[derive(Clone, Debug, Default)]
pub struct Env {
  pub values: Bindings,
  pub systems: BTreeMap<String, PfaffianSystem>,
  pub algebras: BTreeMap<String, LieAlgebraSpec>,
  pub actions: BTreeMap<String, ActionSpec>,
  pub modules: BTreeMap<String, ModuleDef>,
}

impl Env {
  fn is_bound(&self, n: &str) -> bool {
    self.values.contains_key(n)
      || self.systems.contains_key(n)
      || self.algebras.contains_key(n)
      || self.actions.contains_key(n)
      || self.modules.contains_key(n)
  }
}

/// A parsed, fully bound session.
#[derive(Clone, Debug)]
pub struct SessionSpec {
  pub chart: Arc<ChartModel>,
  pub statements: Vec<Statement>,
  /// Source line of each statement.
  pub lines: Vec<usize>,
  pub env: Env,
}

impl PartialEq for SessionSpec {
  fn eq(&self, other: &Self) -> bool { *self.chart == *other.chart && self.statements == other.statements }
}

impl SessionSpec {
  pub fn commands(&self) -> impl Iterator<Item = &Command> {
    self.statements.iter().filter_map(|s| match s {
      Statement::Command(c) => Some(c),
      _ => None,
    })
  }

  pub fn action_count(&self) -> usize { self.env.actions.len() }
}

fn diag(p: Pos, msg: impl Into<String>) -> Diagnostic { Diagnostic::new(p.line, p.col, msg.into(), vec![]) }

const STATEMENTS: &[&str] = &[
  "chart",
  "scalar",
  "form",
  "field",
  "system",
  "algebra",
  "action",
  "module",
  "truncate",
  "check-integrable",
  "check-invariant",
  "check-action",
  "cartan-basis",
  "cohomology",
  "euler",
  "compare-theorem1",
  "scan-obstructions",
  "relative-invariance",
];

/// Parses and binds a whole session. Any error rejects the session.
pub fn parse(src: &str) -> Result<SessionSpec, Diagnostic> {
  let mut p = Parser::new(lex(src)?);
  let mut chart: Option<Arc<ChartModel>> = None;
  let mut statements = Vec::new();
  let mut lines = Vec::new();
  let mut env = Env::default();
  while !p.at_end() {
    if p.eat(&Tok::Newline) {
      continue;
    }
    let start = p.here();
    let (word, _) = p.ident().map_err(|_| p.unexpected(STATEMENTS))?;
    if word == "chart" {
      if chart.is_some() {
        return Err(diag(start, "only one chart per session; gluing several charts is not supported"));
      }
      chart = Some(chart_decl(&mut p)?);
    } else {
      let c = chart.as_ref().ok_or_else(|| diag(start, "declare the chart first"))?;
      let st = statement(&mut p, c, &mut env, &word, start)?;
      statements.push(st);
      lines.push(start.line);
    }
    if !p.at_end() {
      p.expect(Tok::Newline)?;
    }
  }
  let chart = chart.ok_or_else(|| diag(p.here(), "a session needs a `chart` declaration"))?;
  Ok(SessionSpec { chart, statements, lines, env })
}

fn chart_decl(p: &mut Parser) -> Result<Arc<ChartModel>, Diagnostic> {
  let (name, _) = p.ident()?;
  let open = p.here();
  p.expect(Tok::LParen)?;
  let mut coords = Vec::new();
  loop {
    let (n, np) = p.ident()?;
    p.expect(Tok::Colon)?;
    let (k, kp) = p.ident()?;
    let kind = match k.as_str() {
      "flat" => CoordKind::Flat,
      "periodic" => CoordKind::Periodic,
      _ => return Err(Diagnostic::new(kp.line, kp.col, format!("unknown coordinate kind `{k}`"), vec!["flat".into(), "periodic".into()])),
    };
    if coords.iter().any(|c: &Coordinate| c.name == n) {
      return Err(diag(np, format!("coordinate `{n}` declared twice")));
    }
    coords.push(Coordinate { name: n, kind });
    if !p.eat(&Tok::Comma) {
      break;
    }
  }
  p.expect(Tok::RParen)?;
  let base = ChartModel::new(&name, coords).map_err(|e| diag(open, e.to_string()))?;
  if !p.is_keyword("invertible") {
    return Ok(base);
  }
  p.bump();
  let mut dens = Vec::new();
  loop {
    let e = p.expr()?;
    match eval(&base, &Bindings::new(), &e)? {
      Value::Scalar(s) => dens.push(s),
      v => return Err(diag(e.pos(), format!("only scalars can be invertible, found a {}", v.kind()))),
    }
    if !p.eat(&Tok::Comma) {
      break;
    }
  }
  base.localize(&dens).map_err(|e| diag(open, e.to_string()))
}

fn fresh(p: &mut Parser, chart: &ChartModel, env: &Env) -> Result<String, Diagnostic> {
  let (n, np) = p.ident()?;
  if env.is_bound(&n) || chart.index_of(&n).is_ok() {
    return Err(diag(np, format!("`{n}` is already bound")));
  }
  if STATEMENTS.contains(&n.as_str()) || ["d", "sin", "cos"].contains(&n.as_str()) {
    return Err(diag(np, format!("`{n}` is a reserved word")));
  }
  Ok(n)
}

fn value(p: &mut Parser, chart: &Arc<ChartModel>, env: &Env) -> Result<(Value, Pos), Diagnostic> {
  let e = p.expr()?;
  Ok((eval(chart, &env.values, &e)?, e.pos()))
}

fn form_value(p: &mut Parser, chart: &Arc<ChartModel>, env: &Env) -> Result<DifferentialForm, Diagnostic> {
  match value(p, chart, env)? {
    (Value::Scalar(s), _) => Ok(DifferentialForm::scalar(s)),
    (Value::Form(w), _) => Ok(w),
    (v, pos) => Err(diag(pos, format!("expected a form, found a {}", v.kind()))),
  }
}

fn field_value(p: &mut Parser, chart: &Arc<ChartModel>, env: &Env) -> Result<VectorField, Diagnostic> {
  match value(p, chart, env)? {
    (Value::Field(v), _) => Ok(v),
    (Value::Scalar(s), _) if s.is_zero() => Ok(VectorField::zero(chart)),
    (v, pos) => Err(diag(pos, format!("expected a vector field, found a {}", v.kind()))),
  }
}

fn rational(p: &mut Parser, chart: &Arc<ChartModel>) -> Result<BigRational, Diagnostic> {
  match value(p, chart, &Env::default())? {
    (Value::Scalar(s), pos) => s.as_constant().ok_or_else(|| diag(pos, format!("expected a rational number, found `{s}`"))),
    (v, pos) => Err(diag(pos, format!("expected a rational number, found a {}", v.kind()))),
  }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, p: &mut Parser, what: &str) -> Result<(String, &'a T), Diagnostic> {
  let (n, np) = p.ident()?;
  match map.get(&n) {
    Some(v) => Ok((n, v)),
    None => Err(diag(np, format!("no {what} named `{n}`"))),
  }
}

fn statement(p: &mut Parser, chart: &Arc<ChartModel>, env: &mut Env, word: &str, at: Pos) -> Result<Statement, Diagnostic> {
  Ok(match word {
    "scalar" | "form" | "field" => {
      let name = fresh(p, chart, env)?;
      p.expect(Tok::Eq)?;
      let st = match word {
        "scalar" => match value(p, chart, env)? {
          (Value::Scalar(s), _) => Statement::Scalar(name.clone(), s),
          (v, pos) => return Err(diag(pos, format!("expected a scalar, found a {}", v.kind()))),
        },
        "form" => Statement::Form(name.clone(), form_value(p, chart, env)?),
        _ => Statement::Field(name.clone(), field_value(p, chart, env)?),
      };
      let v = match &st {
        Statement::Scalar(_, s) => Value::Scalar(s.clone()),
        Statement::Form(_, w) => Value::Form(w.clone()),
        Statement::Field(_, f) => Value::Field(f.clone()),
        _ => unreachable!("bindings only"),
      };
      env.values.insert(name, v);
      st
    },
    "system" => {
      let name = fresh(p, chart, env)?;
      p.expect(Tok::Eq)?;
      p.expect(Tok::LAngle)?;
      let mut gens = vec![form_value(p, chart, env)?];
      while p.eat(&Tok::Comma) {
        gens.push(form_value(p, chart, env)?);
      }
      p.expect(Tok::RAngle)?;
      let s = PfaffianSystem::new(chart, gens.clone()).map_err(|e| diag(at, e.to_string()))?;
      env.systems.insert(name.clone(), s);
      Statement::System(name, gens)
    },
    "algebra" => {
      let name = fresh(p, chart, env)?;
      p.expect(Tok::Eq)?;
      let g = algebra(p, at)?;
      env.algebras.insert(name.clone(), g.clone());
      Statement::Algebra(name, g)
    },
    "action" => {
      let name = fresh(p, chart, env)?;
      p.expect(Tok::Eq)?;
      let (algebra, g) = lookup(&env.algebras, p, "algebra")?;
      p.keyword("on")?;
      let (system, s) = lookup(&env.systems, p, "system")?;
      p.keyword("by")?;
      p.expect(Tok::LBracket)?;
      let mut fields = Vec::new();
      if *p.peek() != Tok::RBracket {
        fields.push(field_value(p, chart, env)?);
        while p.eat(&Tok::Comma) {
          fields.push(field_value(p, chart, env)?);
        }
      }
      p.expect(Tok::RBracket)?;
      let a = ActionSpec::new(g.clone(), fields.clone(), s.clone()).map_err(|e| diag(at, e.to_string()))?;
      env.actions.insert(name.clone(), a);
      Statement::Action { name, algebra, system, fields }
    },
    "module" => {
      let name = fresh(p, chart, env)?;
      p.expect(Tok::Eq)?;
      let def = module(p, chart, env)?;
      env.modules.insert(name.clone(), def.clone());
      Statement::Module(name, def)
    },
    "truncate" => {
      p.keyword("degree")?;
      let d = count(p)?;
      p.keyword("freq")?;
      let k = count(p)?;
      Statement::Truncate(Truncation::new(d, k))
    },
    _ => Statement::Command(command(p, chart, env, word, at)?),
  })
}

fn count(p: &mut Parser) -> Result<u32, Diagnostic> {
  let (v, vp) = p.int()?;
  v.try_into().map_err(|_| diag(vp, "number too large"))
}

/// `{a, b, c} bracket [a, b] = c, [b, c] = a - 2*b`, or `abelian N`, or `sl2`.
fn algebra(p: &mut Parser, at: Pos) -> Result<LieAlgebraSpec, Diagnostic> {
  if p.is_keyword("abelian") {
    p.bump();
    return Ok(LieAlgebraSpec::abelian(count(p)? as usize));
  }
  if p.is_keyword("sl2") {
    p.bump();
    return Ok(LieAlgebraSpec::sl2());
  }
  p.expect(Tok::LBrace)?;
  let mut names: Vec<String> = Vec::new();
  if *p.peek() != Tok::RBrace {
    loop {
      let (n, np) = p.ident()?;
      if names.contains(&n) {
        return Err(diag(np, format!("basis element `{n}` listed twice")));
      }
      names.push(n);
      if !p.eat(&Tok::Comma) {
        break;
      }
    }
  }
  p.expect(Tok::RBrace)?;
  let mut brackets = Vec::new();
  if p.is_keyword("bracket") {
    p.bump();
    loop {
      p.expect(Tok::LBracket)?;
      let i = basis_index(p, &names)?;
      p.expect(Tok::Comma)?;
      let j = basis_index(p, &names)?;
      p.expect(Tok::RBracket)?;
      p.expect(Tok::Eq)?;
      let rhs = p.expr()?;
      let mut combo = BTreeMap::new();
      linear_combination(&rhs, &names, &BigRational::one(), &mut combo)?;
      brackets.push((i, j, combo.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()));
      if !p.eat(&Tok::Comma) {
        break;
      }
    }
  }
  LieAlgebraSpec::new(names, &brackets).map_err(|e| diag(at, e.to_string()))
}

fn basis_index(p: &mut Parser, names: &[String]) -> Result<usize, Diagnostic> {
  let (n, np) = p.ident()?;
  names.iter().position(|m| *m == n).ok_or_else(|| {
    Diagnostic::new(np.line, np.col, format!("`{n}` is not a basis element"), names.to_vec())
  })
}

fn constant(e: &Expr) -> Option<BigRational> {
  match e {
    Expr::Int(v, _) => Some(BigRational::from_integer(v.clone())),
    Expr::Neg(a, _) => constant(a).map(|c| -c),
    Expr::Div(a, b, _) => {
      let d = constant(b)?;
      (!d.is_zero()).then(|| constant(a).map(|n| n / d)).flatten()
    },
    Expr::Mul(a, b, _) => Some(constant(a)? * constant(b)?),
    _ => None,
  }
}

/// Reads `2*a - 1/2*b + c` as coefficients over the basis `names`.
fn linear_combination(
  e: &Expr,
  names: &[String],
  scale: &BigRational,
  out: &mut BTreeMap<usize, BigRational>,
) -> Result<(), Diagnostic> {
  let bad = |e: &Expr| diag(e.pos(), "expected a rational combination of basis elements");
  match e {
    Expr::Name(n, pos) => {
      let k = names.iter().position(|m| m == n).ok_or_else(|| diag(*pos, format!("`{n}` is not a basis element")))?;
      *out.entry(k).or_insert_with(BigRational::zero) += scale;
    },
    Expr::Int(v, _) if v.is_zero() => {},
    Expr::Add(a, b, _) => {
      linear_combination(a, names, scale, out)?;
      linear_combination(b, names, scale, out)?;
    },
    Expr::Sub(a, b, _) => {
      linear_combination(a, names, scale, out)?;
      linear_combination(b, names, &-scale.clone(), out)?;
    },
    Expr::Neg(a, _) => linear_combination(a, names, &-scale.clone(), out)?,
    Expr::Mul(a, b, _) => match (constant(a), constant(b)) {
      (Some(c), None) => linear_combination(b, names, &(scale * c), out)?,
      (None, Some(c)) => linear_combination(a, names, &(scale * c), out)?,
      _ => return Err(bad(e)),
    },
    Expr::Div(a, b, _) => match constant(b) {
      Some(c) if !c.is_zero() => linear_combination(a, names, &(scale / c), out)?,
      _ => return Err(bad(e)),
    },
    _ => return Err(bad(e)),
  }
  Ok(())
}

/// `g dim 2 rho e1 = [[0, 1], [-1, 0]] rho e2 = ...` or `xi0 phi [shift e1 c]`.
fn module(p: &mut Parser, chart: &Arc<ChartModel>, env: &Env) -> Result<ModuleDef, Diagnostic> {
  if p.is_keyword("xi0") {
    p.bump();
    let (action, a) = lookup(&env.actions, p, "action")?;
    let mut shift = None;
    if p.is_keyword("shift") {
      p.bump();
      let i = basis_index(p, a.algebra.names())?;
      shift = Some((i, rational(p, chart)?));
    }
    return Ok(ModuleDef::Xi0 { action, shift });
  }
  let (algebra, g) = lookup(&env.algebras, p, "algebra")?;
  p.keyword("dim")?;
  let dim = count(p)? as usize;
  let mut rho: Vec<(usize, RationalMatrix)> = Vec::new();
  while p.is_keyword("rho") {
    p.bump();
    let i = basis_index(p, g.names())?;
    let ip = p.here();
    if rho.iter().any(|(k, _)| *k == i) {
      return Err(diag(ip, format!("ρ({}) given twice", g.names()[i])));
    }
    p.expect(Tok::Eq)?;
    let mp = p.here();
    p.expect(Tok::LBracket)?;
    let mut rows = Vec::new();
    loop {
      p.expect(Tok::LBracket)?;
      let mut row = vec![rational(p, chart)?];
      while p.eat(&Tok::Comma) {
        row.push(rational(p, chart)?);
      }
      p.expect(Tok::RBracket)?;
      rows.push(row);
      if !p.eat(&Tok::Comma) {
        break;
      }
    }
    p.expect(Tok::RBracket)?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
      return Err(diag(mp, format!("ρ({}) must be a {dim}x{dim} matrix", g.names()[i])));
    }
    rho.push((i, RationalMatrix::from_rows(dim, &rows)));
  }
  rho.sort_by_key(|(i, _)| *i);
  Ok(ModuleDef::Explicit { algebra, dim, rho })
}

fn command(p: &mut Parser, chart: &Arc<ChartModel>, env: &Env, word: &str, at: Pos) -> Result<Command, Diagnostic> {
  let system_or_action = |p: &mut Parser| -> Result<String, Diagnostic> {
    let (n, np) = p.ident()?;
    if env.systems.contains_key(&n) || env.actions.contains_key(&n) {
      Ok(n)
    } else {
      Err(diag(np, format!("no system or action named `{n}`")))
    }
  };
  Ok(match word {
    "check-integrable" => Command::CheckIntegrable(lookup(&env.systems, p, "system")?.0),
    "check-invariant" => {
      let s = lookup(&env.systems, p, "system")?.0;
      Command::CheckInvariant(s, form_value(p, chart, env)?)
    },
    "check-action" => Command::CheckAction(lookup(&env.actions, p, "action")?.0),
    "cartan-basis" => Command::CartanBasis(lookup(&env.actions, p, "action")?.0),
    "cohomology" => {
      let (k, kp) = p.ident()?;
      let kind = match k.as_str() {
        "vertical" => ComplexKind::Vertical,
        "invariant" => ComplexKind::Invariant,
        "equivariant" => ComplexKind::Equivariant,
        "ce" => ComplexKind::Ce,
        _ => {
          return Err(Diagnostic::new(
            kp.line,
            kp.col,
            format!("unknown complex `{k}`"),
            ["vertical", "invariant", "equivariant", "ce"].iter().map(|s| s.to_string()).collect(),
          ))
        },
      };
      let target = match kind {
        ComplexKind::Vertical | ComplexKind::Equivariant => lookup(&env.actions, p, "action")?.0,
        ComplexKind::Invariant => lookup(&env.systems, p, "system")?.0,
        ComplexKind::Ce => {
          let (n, np) = p.ident()?;
          if !env.modules.contains_key(&n) && !env.algebras.contains_key(&n) {
            return Err(diag(np, format!("no module or algebra named `{n}`")));
          }
          n
        },
      };
      Command::Cohomology(kind, target)
    },
    "euler" => {
      let a = lookup(&env.actions, p, "action")?.0;
      Command::Euler(a, form_value(p, chart, env)?)
    },
    "compare-theorem1" => {
      let a = lookup(&env.actions, p, "action")?.0;
      let m = if p.is_keyword("with") {
        p.bump();
        Some(lookup(&env.modules, p, "module")?.0)
      } else {
        None
      };
      Command::CompareTheorem1(a, m)
    },
    "scan-obstructions" => {
      let a = lookup(&env.actions, p, "action")?.0;
      p.keyword("against")?;
      p.expect(Tok::LBracket)?;
      let mut ms = Vec::new();
      if *p.peek() != Tok::RBracket {
        ms.push(lookup(&env.modules, p, "module")?.0);
        while p.eat(&Tok::Comma) {
          ms.push(lookup(&env.modules, p, "module")?.0);
        }
      }
      p.expect(Tok::RBracket)?;
      Command::ScanObstructions(a, ms)
    },
    "relative-invariance" => {
      let s = system_or_action(p)?;
      Command::RelativeInvariance(s, form_value(p, chart, env)?)
    },
    _ => return Err(Diagnostic::new(at.line, at.col, format!("unknown statement `{word}`"), STATEMENTS.iter().map(|s| s.to_string()).collect())),
  })
}

fn fmt_matrix(m: &RationalMatrix) -> String {
  let rows: Vec<String> = (0..m.rows())
    .map(|r| format!("[{}]", (0..m.cols()).map(|c| m.get(r, c).to_string()).collect::<Vec<_>>().join(", ")))
    .collect();
  format!("[{}]", rows.join(", "))
}

fn join<T: fmt::Display>(xs: &[T]) -> String { xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ") }

impl Statement {
  fn print(&self, env: &Env) -> String {
    match self {
      Statement::Scalar(n, s) => format!("scalar {n} = {s}"),
      Statement::Form(n, w) => format!("form {n} = {w}"),
      Statement::Field(n, v) => format!("field {n} = {v}"),
      Statement::System(n, gens) => format!("system {n} = <{}>", join(gens)),
      Statement::Algebra(n, g) => format!("algebra {n} = {g}"),
      Statement::Action { name, algebra, system, fields } => {
        format!("action {name} = {algebra} on {system} by [{}]", join(fields))
      },
      Statement::Module(n, ModuleDef::Xi0 { action, shift }) => {
        let mut s = format!("module {n} = xi0 {action}");
        if let (Some((i, c)), Some(a)) = (shift, env.actions.get(action)) {
          s += &format!(" shift {} {c}", a.algebra.names()[*i]);
        }
        s
      },
      Statement::Module(n, ModuleDef::Explicit { algebra, dim, rho }) => {
        let mut s = format!("module {n} = {algebra} dim {dim}");
        let names = env.algebras.get(algebra).map(|g| g.names().to_vec()).unwrap_or_default();
        for (i, m) in rho {
          s += &format!(" rho {} = {}", names[*i], fmt_matrix(m));
        }
        s
      },
      Statement::Truncate(t) => format!("truncate {t}"),
      Statement::Command(c) => c.to_string(),
    }
  }
}

impl fmt::Display for SessionSpec {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "{}", self.chart)?;
    for s in &self.statements {
      writeln!(f, "{}", s.print(&self.env))?;
    }
    Ok(())
  }
}
