use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::chart::{ChartModel, CoordKind};
use super::expr::ScalarExpr;
use crate::error::{Error, Result};

/// An unnormalized scalar expression tree, as produced by a parser or by hand.
#[derive(Debug, Clone, PartialEq)]
pub enum RawScalar {
  Num(BigRational),
  Coord(String),
  Add(Vec<RawScalar>),
  Mul(Vec<RawScalar>),
  Neg(Box<RawScalar>),
  Pow(Box<RawScalar>, u32),
  /// Multiplicative inverse; only constants and declared denominators qualify.
  Inv(Box<RawScalar>),
  Sin(Box<RawScalar>),
  Cos(Box<RawScalar>),
}

impl RawScalar {
  pub fn int(v: i64) -> Self { RawScalar::Num(BigRational::from_integer(v.into())) }

  pub fn var(name: &str) -> Self { RawScalar::Coord(name.into()) }
}

/// Normalizes a raw expression on `chart`.
pub fn normalize(chart: &Arc<ChartModel>, raw: &RawScalar) -> Result<ScalarExpr> {
  Ok(match raw {
    RawScalar::Num(c) => ScalarExpr::constant(chart, c.clone()),
    RawScalar::Coord(n) => ScalarExpr::coordinate(chart, n)?,
    RawScalar::Add(xs) => {
      let mut acc = ScalarExpr::zero(chart);
      for x in xs {
        acc = &acc + &normalize(chart, x)?;
      }
      acc
    },
    RawScalar::Mul(xs) => {
      let mut acc = ScalarExpr::one(chart);
      for x in xs {
        acc = &acc * &normalize(chart, x)?;
      }
      acc
    },
    RawScalar::Neg(x) => -normalize(chart, x)?,
    RawScalar::Pow(x, e) => normalize(chart, x)?.pow(*e),
    RawScalar::Inv(x) => normalize(chart, x)?.try_inverse()?,
    RawScalar::Sin(a) => trig(chart, a, true)?,
    RawScalar::Cos(a) => trig(chart, a, false)?,
  })
}

fn trig(chart: &Arc<ChartModel>, arg: &RawScalar, is_sin: bool) -> Result<ScalarExpr> {
  let combo = angle_combination(chart, arg)?;
  ScalarExpr::trig_of_combination(chart, &combo, is_sin)
}

/// Reads an angle `k_1 t_1 + ... + k_m t_m` with integer `k_i` and periodic `t_i`.
pub fn angle_combination(chart: &Arc<ChartModel>, arg: &RawScalar) -> Result<Vec<(usize, i64)>> {
  let mut out: Vec<(usize, i64)> = Vec::new();
  collect_angle(chart, arg, 1, &mut out)?;
  out.retain(|&(_, k)| k != 0);
  Ok(out)
}

fn collect_angle(chart: &Arc<ChartModel>, arg: &RawScalar, mult: i64, out: &mut Vec<(usize, i64)>) -> Result<()> {
  let bad = || Error::TrigOfFlat(format!("{arg:?}"));
  match arg {
    RawScalar::Coord(n) => {
      let i = chart.index_of(n)?;
      if chart.kind(i) != CoordKind::Periodic {
        return Err(Error::TrigOfFlat(n.clone()));
      }
      match out.iter_mut().find(|(j, _)| *j == i) {
        Some((_, k)) => *k += mult,
        None => out.push((i, mult)),
      }
      Ok(())
    },
    RawScalar::Num(c) if c.is_zero() => Ok(()),
    RawScalar::Add(xs) => xs.iter().try_for_each(|x| collect_angle(chart, x, mult, out)),
    RawScalar::Neg(x) => collect_angle(chart, x, -mult, out),
    RawScalar::Mul(xs) => {
      let mut k = mult;
      let mut angle = None;
      for x in xs {
        match x {
          RawScalar::Num(c) if c.is_integer() => k *= c.to_integer().to_i64().ok_or_else(bad)?,
          other if angle.is_none() => angle = Some(other),
          _ => return Err(bad()),
        }
      }
      match angle {
        Some(a) => collect_angle(chart, a, k, out),
        None => Err(bad()),
      }
    },
    _ => Err(bad()),
  }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalars::chart::CoordKind::{Flat, Periodic};

  fn chart() -> Arc<ChartModel> { ChartModel::from_spec("c", &[("x", Flat), ("t", Periodic)]).unwrap() }

  #[test]
  fn normalization_errors() {
    let c = chart();
    assert!(matches!(normalize(&c, &RawScalar::var("w")), Err(Error::UnknownCoordinate(_))));
    assert!(matches!(
      normalize(&c, &RawScalar::Inv(Box::new(RawScalar::var("x")))),
      Err(Error::UndeclaredDenominator(_))
    ));
    assert!(matches!(normalize(&c, &RawScalar::Sin(Box::new(RawScalar::var("x")))), Err(Error::TrigOfFlat(_))));
  }

  #[test]
  fn multiple_angles() {
    let c = chart();
    let raw = RawScalar::Cos(Box::new(RawScalar::Mul(vec![RawScalar::int(3), RawScalar::var("t")])));
    let e = normalize(&c, &raw).unwrap();
    assert_eq!(e, ScalarExpr::trig(&c, "t", false, 3).unwrap());
  }

  #[test]
  fn idempotent_on_a_composite() {
    let c = chart();
    let raw = RawScalar::Mul(vec![
      RawScalar::Add(vec![RawScalar::var("x"), RawScalar::int(1)]),
      RawScalar::Pow(Box::new(RawScalar::Sin(Box::new(RawScalar::var("t")))), 3),
    ]);
    let e = normalize(&c, &raw).unwrap();
    let again = crate::cli::parse_scalar(&c, &e.to_string()).unwrap();
    assert_eq!(e, again);
  }
}
