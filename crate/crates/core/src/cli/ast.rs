use num_bigint::BigInt;

/// A source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
  pub line: usize,
  pub col: usize,
}

/// Untyped expression tree; types are resolved during evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
  Int(BigInt, Pos),
  Name(String, Pos),
  /// `d/dx`
  Partial(String, Pos),
  Neg(Box<Expr>, Pos),
  Add(Box<Expr>, Box<Expr>, Pos),
  Sub(Box<Expr>, Box<Expr>, Pos),
  Mul(Box<Expr>, Box<Expr>, Pos),
  Div(Box<Expr>, Box<Expr>, Pos),
  Wedge(Box<Expr>, Box<Expr>, Pos),
  Pow(Box<Expr>, u32, Pos),
  Call(String, Vec<Expr>, Pos),
}

impl Expr {
  pub fn pos(&self) -> Pos {
    match self {
      Expr::Int(_, p)
      | Expr::Name(_, p)
      | Expr::Partial(_, p)
      | Expr::Neg(_, p)
      | Expr::Add(_, _, p)
      | Expr::Sub(_, _, p)
      | Expr::Mul(_, _, p)
      | Expr::Div(_, _, p)
      | Expr::Wedge(_, _, p)
      | Expr::Pow(_, _, p)
      | Expr::Call(_, _, p) => *p,
    }
  }
}
