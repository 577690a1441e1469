use std::fmt;

use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
  Ident(String),
  Int(String),
  /// `d/dx`, the coordinate vector field of `x`.
  Partial(String),
  Wedge,
  Arrow,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  LAngle,
  RAngle,
  Comma,
  Colon,
  Eq,
  Pipe,
  Newline,
  Eof,
}

impl fmt::Display for Tok {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      Tok::Ident(s) => write!(f, "identifier `{s}`"),
      Tok::Int(s) => write!(f, "number `{s}`"),
      Tok::Partial(s) => write!(f, "`d/d{s}`"),
      Tok::Newline => write!(f, "end of line"),
      Tok::Eof => write!(f, "end of input"),
      other => write!(f, "`{}`", symbol(other)),
    }
  }
}

pub(crate) fn symbol(t: &Tok) -> &'static str {
  match t {
    Tok::Wedge => "∧",
    Tok::Arrow => "->",
    Tok::Plus => "+",
    Tok::Minus => "-",
    Tok::Star => "*",
    Tok::Slash => "/",
    Tok::Caret => "^",
    Tok::LParen => "(",
    Tok::RParen => ")",
    Tok::LBracket => "[",
    Tok::RBracket => "]",
    Tok::LBrace => "{",
    Tok::RBrace => "}",
    Tok::LAngle => "<",
    Tok::RAngle => ">",
    Tok::Comma => ",",
    Tok::Colon => ":",
    Tok::Eq => "=",
    Tok::Pipe => "|",
    _ => "?",
  }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
  pub tok: Tok,
  pub line: usize,
  pub col: usize,
}

/// Splits source text into tokens. Newlines are significant (they end
/// statements) except inside brackets of any kind; `#` starts a comment.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
  let chars: Vec<char> = src.chars().collect();
  let mut out = Vec::new();
  let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
  let mut depth = 0i32;
  macro_rules! push {
    ($t:expr, $l:expr, $c:expr) => {
      out.push(Token { tok: $t, line: $l, col: $c })
    };
  }
  while i < chars.len() {
    let c = chars[i];
    let (l0, c0) = (line, col);
    if c == '\n' {
      if depth == 0 && !matches!(out.last(), Some(Token { tok: Tok::Newline, .. }) | None) {
        push!(Tok::Newline, l0, c0);
      }
      i += 1;
      line += 1;
      col = 1;
      continue;
    }
    if c.is_whitespace() {
      i += 1;
      col += 1;
      continue;
    }
    if c == '#' {
      while i < chars.len() && chars[i] != '\n' {
        i += 1;
      }
      continue;
    }
    if c.is_ascii_digit() {
      let s = i;
      while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
      }
      col += i - s;
      push!(Tok::Int(chars[s..i].iter().collect()), l0, c0);
      continue;
    }
    if c.is_alphabetic() || c == '_' {
      let s = i;
      while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
        // hyphens only join words inside command names like `check-action`
        if chars[i] == '-' && !(i + 1 < chars.len() && chars[i + 1].is_alphabetic() && is_command_prefix(&chars[s..i])) {
          break;
        }
        i += 1;
      }
      let word: String = chars[s..i].iter().collect();
      // `d/dx` is one token
      if word == "d" && i + 2 < chars.len() && chars[i] == '/' && chars[i + 1] == 'd' && (chars[i + 2].is_alphabetic() || chars[i + 2] == '_') {
        let mut j = i + 2;
        while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
          j += 1;
        }
        col += j - s;
        push!(Tok::Partial(chars[i + 2..j].iter().collect()), l0, c0);
        i = j;
        continue;
      }
      col += i - s;
      push!(Tok::Ident(word), l0, c0);
      continue;
    }
    let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
    let (tok, w) = match (c, two.as_str()) {
      (_, "->") => (Tok::Arrow, 2),
      (_, "/\\") => (Tok::Wedge, 2),
      ('∧', _) => (Tok::Wedge, 1),
      ('+', _) => (Tok::Plus, 1),
      ('-', _) => (Tok::Minus, 1),
      ('*', _) => (Tok::Star, 1),
      ('/', _) => (Tok::Slash, 1),
      ('^', _) => (Tok::Caret, 1),
      ('(', _) => (Tok::LParen, 1),
      (')', _) => (Tok::RParen, 1),
      ('[', _) => (Tok::LBracket, 1),
      (']', _) => (Tok::RBracket, 1),
      ('{', _) => (Tok::LBrace, 1),
      ('}', _) => (Tok::RBrace, 1),
      ('<', _) | ('⟨', _) => (Tok::LAngle, 1),
      ('>', _) | ('⟩', _) => (Tok::RAngle, 1),
      (',', _) => (Tok::Comma, 1),
      (':', _) => (Tok::Colon, 1),
      ('=', _) => (Tok::Eq, 1),
      ('|', _) => (Tok::Pipe, 1),
      (';', _) => (Tok::Newline, 1),
      _ => {
        return Err(Diagnostic::new(l0, c0, format!("unexpected character `{c}`"), vec![]));
      },
    };
    match tok {
      Tok::LParen | Tok::LBracket | Tok::LBrace | Tok::LAngle => depth += 1,
      Tok::RParen | Tok::RBracket | Tok::RBrace | Tok::RAngle => depth -= 1,
      _ => {},
    }
    if tok == Tok::Newline {
      if !matches!(out.last(), Some(Token { tok: Tok::Newline, .. }) | None) {
        push!(tok, l0, c0);
      }
    } else {
      push!(tok, l0, c0);
    }
    i += w;
    col += w;
  }
  if !matches!(out.last(), Some(Token { tok: Tok::Newline, .. }) | None) {
    out.push(Token { tok: Tok::Newline, line, col });
  }
  out.push(Token { tok: Tok::Eof, line, col });
  Ok(out)
}

/// Words that start hyphenated command names.
fn is_command_prefix(word: &[char]) -> bool {
  let w: String = word.iter().collect();
  ["check", "cartan", "compare", "scan", "relative"].contains(&w.as_str())
}
