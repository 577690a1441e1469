use num_bigint::BigInt;

use super::ast::{Expr, Pos};
use super::lexer::{symbol, Tok, Token};
use super::Diagnostic;

const OPERAND_START: &[&str] = &["number", "identifier", "d/d<coordinate>", "(", "-"];

/// Token cursor shared by the expression and statement grammars.
pub(crate) struct Parser {
  toks: Vec<Token>,
  at: usize,
}

impl Parser {
  pub fn new(toks: Vec<Token>) -> Self { Self { toks, at: 0 } }

  pub fn peek(&self) -> &Tok { &self.toks[self.at].tok }

  pub fn here(&self) -> Pos {
    let t = &self.toks[self.at];
    Pos { line: t.line, col: t.col }
  }

  pub fn bump(&mut self) -> Token {
    let t = self.toks[self.at].clone();
    if self.at + 1 < self.toks.len() {
      self.at += 1;
    }
    t
  }

  pub fn eat(&mut self, t: &Tok) -> bool {
    if self.peek() == t {
      self.bump();
      true
    } else {
      false
    }
  }

  pub fn at_end(&self) -> bool { *self.peek() == Tok::Eof }

  /// A diagnostic at the current token listing what would have been accepted.
  pub fn unexpected(&self, expected: &[&str]) -> Diagnostic {
    let p = self.here();
    Diagnostic::new(
      p.line,
      p.col,
      format!("unexpected {}", self.peek()),
      expected.iter().map(|s| s.to_string()).collect(),
    )
  }

  pub fn expect(&mut self, t: Tok) -> Result<Token, Diagnostic> {
    if *self.peek() == t {
      Ok(self.bump())
    } else {
      let want = match &t {
        Tok::Newline => "end of line".to_string(),
        other => symbol(other).to_string(),
      };
      Err(self.unexpected(&[&want]))
    }
  }

  pub fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
    let p = self.here();
    match self.peek().clone() {
      Tok::Ident(s) => {
        self.bump();
        Ok((s, p))
      },
      _ => Err(self.unexpected(&["identifier"])),
    }
  }

  pub fn keyword(&mut self, kw: &str) -> Result<Pos, Diagnostic> {
    let p = self.here();
    match self.peek() {
      Tok::Ident(s) if s == kw => {
        self.bump();
        Ok(p)
      },
      _ => Err(self.unexpected(&[kw])),
    }
  }

  pub fn is_keyword(&self, kw: &str) -> bool { matches!(self.peek(), Tok::Ident(s) if s == kw) }

  pub fn int(&mut self) -> Result<(BigInt, Pos), Diagnostic> {
    let p = self.here();
    match self.peek().clone() {
      Tok::Int(s) => {
        self.bump();
        Ok((s.parse().expect("lexer yields digits"), p))
      },
      _ => Err(self.unexpected(&["number"])),
    }
  }

  fn starts_operand(&self) -> bool {
    matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Partial(_) | Tok::LParen | Tok::Minus)
  }

  fn operand_after(&self, op: Pos, sym: &str) -> Result<(), Diagnostic> {
    if self.starts_operand() {
      Ok(())
    } else {
      Err(Diagnostic::new(
        op.line,
        op.col,
        format!("dangling `{sym}`: found {} where an operand should follow", self.peek()),
        OPERAND_START.iter().map(|s| s.to_string()).collect(),
      ))
    }
  }

  /// expr := wedge (('+' | '-') wedge)*
  pub fn expr(&mut self) -> Result<Expr, Diagnostic> {
    let mut lhs = self.wedge()?;
    loop {
      let p = self.here();
      let sub = match self.peek() {
        Tok::Plus => false,
        Tok::Minus => true,
        _ => return Ok(lhs),
      };
      self.bump();
      self.operand_after(p, if sub { "-" } else { "+" })?;
      let rhs = self.wedge()?;
      lhs = if sub { Expr::Sub(Box::new(lhs), Box::new(rhs), p) } else { Expr::Add(Box::new(lhs), Box::new(rhs), p) };
    }
  }

  /// wedge := product ('∧' product)*
  fn wedge(&mut self) -> Result<Expr, Diagnostic> {
    let mut lhs = self.product()?;
    while *self.peek() == Tok::Wedge {
      let p = self.here();
      self.bump();
      self.operand_after(p, "∧")?;
      let rhs = self.product()?;
      lhs = Expr::Wedge(Box::new(lhs), Box::new(rhs), p);
    }
    Ok(lhs)
  }

  /// product := unary (('*' | '/') unary)*
  fn product(&mut self) -> Result<Expr, Diagnostic> {
    let mut lhs = self.unary()?;
    loop {
      let p = self.here();
      let div = match self.peek() {
        Tok::Star => false,
        Tok::Slash => true,
        _ => return Ok(lhs),
      };
      self.bump();
      self.operand_after(p, if div { "/" } else { "*" })?;
      let rhs = self.unary()?;
      lhs = if div { Expr::Div(Box::new(lhs), Box::new(rhs), p) } else { Expr::Mul(Box::new(lhs), Box::new(rhs), p) };
    }
  }

  fn unary(&mut self) -> Result<Expr, Diagnostic> {
    if *self.peek() == Tok::Minus {
      let p = self.here();
      self.bump();
      self.operand_after(p, "-")?;
      return Ok(Expr::Neg(Box::new(self.unary()?), p));
    }
    self.power()
  }

  fn power(&mut self) -> Result<Expr, Diagnostic> {
    let base = self.atom()?;
    if *self.peek() == Tok::Caret {
      let p = self.here();
      self.bump();
      let (e, ep) = self.int()?;
      let e: u32 = e.try_into().map_err(|_| Diagnostic::new(ep.line, ep.col, "exponent too large".into(), vec![]))?;
      return Ok(Expr::Pow(Box::new(base), e, p));
    }
    Ok(base)
  }

  fn atom(&mut self) -> Result<Expr, Diagnostic> {
    let p = self.here();
    match self.peek().clone() {
      Tok::Int(s) => {
        self.bump();
        Ok(Expr::Int(s.parse().expect("lexer yields digits"), p))
      },
      Tok::Partial(n) => {
        self.bump();
        Ok(Expr::Partial(n, p))
      },
      Tok::Ident(n) => {
        self.bump();
        if *self.peek() == Tok::LParen {
          self.bump();
          let mut args = vec![self.expr()?];
          while self.eat(&Tok::Comma) {
            args.push(self.expr()?);
          }
          self.expect(Tok::RParen)?;
          Ok(Expr::Call(n, args, p))
        } else {
          Ok(Expr::Name(n, p))
        }
      },
      Tok::LParen => {
        self.bump();
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
      },
      _ => Err(self.unexpected(OPERAND_START)),
    }
  }
}
