use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::chart::{ChartModel, CoordKind};
use super::monomial::{
  fourier, numer_add, numer_add_term, numer_constant, numer_div_exact, numer_is_constant, numer_mul, numer_one,
  numer_partial, numer_pow, numer_scale, Mono, Numer,
};
use crate::error::{Error, Result};

/// An exact coefficient function on a chart.
///
/// The normal form is `N / (D_1^{e_1} ... D_m^{e_m})` where `N` is a finite sum of
/// rational multiples of (flat monomial) x (Fourier basis element per periodic
/// coordinate), the `D_j` are the chart's declared denominators, and no `D_j` with
/// `e_j > 0` divides `N`. The zero function is the empty sum with all `e_j = 0`.
#[derive(Clone)]
pub struct ScalarExpr {
  chart: Arc<ChartModel>,
  num: Numer,
  den: SmallVec<[u32; 2]>,
}

impl PartialEq for ScalarExpr {
  fn eq(&self, other: &Self) -> bool { self.chart.same_as(&other.chart) && self.num == other.num && self.den == other.den }
}

impl Eq for ScalarExpr {}

impl fmt::Debug for ScalarExpr {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "ScalarExpr({self})") }
}

impl ScalarExpr {
  fn from_parts(chart: &Arc<ChartModel>, num: Numer, den: SmallVec<[u32; 2]>) -> Self {
    let mut e = Self { chart: chart.clone(), num, den };
    e.reduce();
    e
  }

  pub fn zero(chart: &Arc<ChartModel>) -> Self {
    Self { chart: chart.clone(), num: Numer::new(), den: SmallVec::from_elem(0, chart.denominators().len()) }
  }

  pub fn one(chart: &Arc<ChartModel>) -> Self { Self::constant(chart, BigRational::one()) }

  pub fn constant(chart: &Arc<ChartModel>, c: BigRational) -> Self {
    let mut e = Self::zero(chart);
    if !c.is_zero() {
      e.num.insert(SmallVec::from_elem(0, chart.dim()), c);
    }
    e
  }

  pub fn integer(chart: &Arc<ChartModel>, c: i64) -> Self { Self::constant(chart, BigRational::from_integer(c.into())) }

  /// The coordinate function of a flat coordinate.
  pub fn coordinate(chart: &Arc<ChartModel>, name: &str) -> Result<Self> {
    let i = chart.index_of(name)?;
    if chart.kind(i) == CoordKind::Periodic {
      return Err(Error::InvalidArgument(format!(
        "`{name}` is periodic; use cos({name}) and sin({name}) instead of the angle itself"
      )));
    }
    Ok(Self::monomial(chart, BigRational::one(), &[(i, 1)]))
  }

  /// `c * prod x_i^{e_i}` for flat coordinates, or Fourier codes for periodic ones.
  pub fn monomial(chart: &Arc<ChartModel>, c: BigRational, entries: &[(usize, i32)]) -> Self {
    let mut m: Mono = SmallVec::from_elem(0, chart.dim());
    for &(i, e) in entries {
      m[i] = e;
    }
    let mut e = Self::zero(chart);
    numer_add_term(&mut e.num, m, c);
    e
  }

  /// Wraps a single normalized monomial.
  pub fn from_mono(chart: &Arc<ChartModel>, m: Mono, c: BigRational) -> Self {
    let mut e = Self::zero(chart);
    numer_add_term(&mut e.num, m, c);
    e
  }

  /// `cos(k t)` or `sin(k t)` for a periodic coordinate `t`.
  pub fn trig(chart: &Arc<ChartModel>, name: &str, is_sin: bool, k: i64) -> Result<Self> {
    let i = chart.index_of(name)?;
    if chart.kind(i) != CoordKind::Periodic {
      return Err(Error::TrigOfFlat(name.into()));
    }
    Ok(match fourier(is_sin, k) {
      None => Self::zero(chart),
      Some((s, code)) => Self::monomial(chart, BigRational::from_integer(s.into()), &[(i, code)]),
    })
  }

  /// `cos(sum k_i t_i)` or `sin(sum k_i t_i)` by repeated angle addition.
  pub fn trig_of_combination(chart: &Arc<ChartModel>, combo: &[(usize, i64)], is_sin: bool) -> Result<Self> {
    for &(i, _) in combo {
      if chart.kind(i) != CoordKind::Periodic {
        return Err(Error::TrigOfFlat(chart.coords()[i].name.clone()));
      }
    }
    // (cos, sin) of the partial sum
    let mut c = Self::one(chart);
    let mut s = Self::zero(chart);
    for &(i, k) in combo {
      let name = &chart.coords()[i].name;
      let ck = Self::trig(chart, name, false, k)?;
      let sk = Self::trig(chart, name, true, k)?;
      let nc = &(&c * &ck) - &(&s * &sk);
      let ns = &(&s * &ck) + &(&c * &sk);
      c = nc;
      s = ns;
    }
    Ok(if is_sin { s } else { c })
  }

  /// The inverse of the `j`-th declared denominator.
  pub fn inverse_denominator(chart: &Arc<ChartModel>, j: usize) -> Self {
    let mut den = SmallVec::from_elem(0, chart.denominators().len());
    den[j] = 1;
    Self::from_parts(chart, numer_one(chart.dim()), den)
  }

  /// The `j`-th declared denominator as an element of the ring.
  pub fn denominator(chart: &Arc<ChartModel>, j: usize) -> Self {
    Self::from_parts(chart, chart.denominators()[j].clone(), SmallVec::from_elem(0, chart.denominators().len()))
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn numer(&self) -> &Numer { &self.num }

  pub fn den_exponents(&self) -> &[u32] { &self.den }

  pub fn has_denominator(&self) -> bool { self.den.iter().any(|&e| e > 0) }

  pub fn is_zero(&self) -> bool { self.num.is_empty() }

  pub fn is_constant(&self) -> bool { numer_is_constant(&self.num) && !self.has_denominator() }

  pub fn as_constant(&self) -> Option<BigRational> {
    if self.has_denominator() {
      return None;
    }
    numer_constant(&self.num)
  }

  pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> { self.num.iter() }

  pub fn num_terms(&self) -> usize { self.num.len() }

  fn reduce(&mut self) {
    if self.num.is_empty() {
      self.den.iter_mut().for_each(|e| *e = 0);
      return;
    }
    for j in 0..self.den.len() {
      while self.den[j] > 0 {
        match numer_div_exact(&self.chart, &self.num, &self.chart.denominators()[j]) {
          Some(q) => {
            self.num = q;
            self.den[j] -= 1;
          },
          None => break,
        }
      }
    }
  }

  fn lift_to(&self, target: &[u32]) -> Numer {
    let mut n = self.num.clone();
    for (j, (&have, &want)) in self.den.iter().zip(target).enumerate() {
      if want > have {
        let p = numer_pow(&self.chart, &self.chart.denominators()[j], want - have);
        n = numer_mul(&self.chart, &n, &p);
      }
    }
    n
  }

  pub fn try_add(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    if self.den == other.den {
      let mut e = Self { chart: self.chart.clone(), num: numer_add(&self.num, &other.num), den: self.den.clone() };
      if e.has_denominator() {
        e.reduce();
      } else if e.num.is_empty() {
        e.den.iter_mut().for_each(|x| *x = 0);
      }
      return Ok(e);
    }
    if other.is_zero() {
      return Ok(self.clone());
    }
    if self.is_zero() {
      return Ok(other.clone());
    }
    let target: SmallVec<[u32; 2]> = self.den.iter().zip(&other.den).map(|(a, b)| *a.max(b)).collect();
    let n = numer_add(&self.lift_to(&target), &other.lift_to(&target));
    Ok(Self::from_parts(&self.chart, n, target))
  }

  pub fn try_mul(&self, other: &Self) -> Result<Self> {
    self.chart.check_same(&other.chart)?;
    if self.is_zero() || other.is_zero() {
      return Ok(Self::zero(&self.chart));
    }
    let n = numer_mul(&self.chart, &self.num, &other.num);
    let den: SmallVec<[u32; 2]> = self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect();
    Ok(Self::from_parts(&self.chart, n, den))
  }

  pub fn scale(&self, c: &BigRational) -> Self {
    if c.is_zero() {
      return Self::zero(&self.chart);
    }
    Self { chart: self.chart.clone(), num: numer_scale(&self.num, c), den: self.den.clone() }
  }

  pub fn scale_int(&self, c: i64) -> Self { self.scale(&BigRational::from_integer(c.into())) }

  pub fn pow(&self, e: u32) -> Self {
    let mut out = Self::one(&self.chart);
    for _ in 0..e {
      out = &out * self;
    }
    out
  }

  /// Multiplicative inverse, when the element is a rational constant times a
  /// product of declared denominators.
  pub fn try_inverse(&self) -> Result<Self> {
    if self.is_zero() {
      return Err(Error::InvalidArgument("division by zero".into()));
    }
    let mut rest = self.num.clone();
    let mut stripped: SmallVec<[u32; 2]> = SmallVec::from_elem(0, self.den.len());
    for j in 0..self.den.len() {
      while !numer_is_constant(&rest) {
        match numer_div_exact(&self.chart, &rest, &self.chart.denominators()[j]) {
          Some(q) => {
            rest = q;
            stripped[j] += 1;
          },
          None => break,
        }
      }
    }
    match numer_constant(&rest) {
      Some(c) if !c.is_zero() => {
        let mut num = numer_one(self.chart.dim());
        for (j, &e) in self.den.iter().enumerate() {
          if e > 0 {
            num = numer_mul(&self.chart, &num, &numer_pow(&self.chart, &self.chart.denominators()[j], e));
          }
        }
        Ok(Self::from_parts(&self.chart, numer_scale(&num, &c.recip()), stripped))
      },
      _ => Err(Error::UndeclaredDenominator(self.to_string())),
    }
  }

  /// Exact partial derivative with respect to coordinate index `i`.
  pub fn partial_index(&self, i: usize) -> Self {
    let chart = &self.chart;
    let mut out = Self::from_parts(chart, numer_partial(chart, &self.num, i), self.den.clone());
    for (j, &e) in self.den.iter().enumerate() {
      if e == 0 {
        continue;
      }
      let dd = numer_partial(chart, &chart.denominators()[j], i);
      if dd.is_empty() {
        continue;
      }
      // d(N D^-e) contributes -e N D' D^-(e+1)
      let mut den = self.den.clone();
      den[j] += 1;
      let n = numer_scale(&numer_mul(chart, &self.num, &dd), &BigRational::from_integer((-(e as i64)).into()));
      out = &out + &Self::from_parts(chart, n, den);
    }
    out
  }

  pub fn partial(&self, coord: &str) -> Result<Self> { Ok(self.partial_index(self.chart.index_of(coord)?)) }

  /// Whether the function depends on coordinate `i`.
  pub fn depends_on(&self, i: usize) -> bool {
    self.num.keys().any(|m| m[i] != 0)
      || self.den.iter().enumerate().any(|(j, &e)| e > 0 && self.chart.denominators()[j].keys().any(|m| m[i] != 0))
  }

  /// Floating-point evaluation; periodic coordinates are angles in radians.
  pub fn eval(&self, point: &[f64]) -> f64 {
    let chart = &self.chart;
    let eval_numer = |n: &Numer| -> f64 {
      n.iter()
        .map(|(m, c)| {
          let mut v = c.to_f64().unwrap_or(f64::NAN);
          for (i, &e) in m.iter().enumerate() {
            v *= match chart.kind(i) {
              CoordKind::Flat => point[i].powi(e),
              CoordKind::Periodic if e >= 0 => (e as f64 * point[i]).cos(),
              CoordKind::Periodic => (-e as f64 * point[i]).sin(),
            };
          }
          v
        })
        .sum()
    };
    let mut v = eval_numer(&self.num);
    for (j, &e) in self.den.iter().enumerate() {
      if e > 0 {
        v /= eval_numer(&chart.denominators()[j]).powi(e as i32);
      }
    }
    v
  }

  /// Exact antiderivative in a flat coordinate, or in a periodic coordinate when
  /// the zero-frequency part vanishes. Terms whose denominators depend on the
  /// coordinate, and zero modes of periodic coordinates, are returned as the
  /// obstruction (second component).
  pub fn antiderivative(&self, i: usize) -> (Self, Self) {
    let chart = &self.chart;
    if self.den.iter().enumerate().any(|(j, &e)| e > 0 && chart.denominators()[j].keys().any(|m| m[i] != 0)) {
      return (Self::zero(chart), self.clone());
    }
    let mut prim = Numer::new();
    let mut obstruction = Numer::new();
    for (m, c) in &self.num {
      let e = m[i];
      let mut m2 = m.clone();
      match chart.kind(i) {
        CoordKind::Flat => {
          m2[i] = e + 1;
          numer_add_term(&mut prim, m2, c / BigRational::from_integer((e + 1).into()));
        },
        CoordKind::Periodic if e == 0 => numer_add_term(&mut obstruction, m.clone(), c.clone()),
        CoordKind::Periodic => {
          // int cos(kt) = sin(kt)/k ; int sin(kt) = -cos(kt)/k
          let k = BigRational::from_integer(BigInt::from(e.unsigned_abs()));
          m2[i] = -e;
          let t = if e > 0 { c / k } else { -(c / k) };
          numer_add_term(&mut prim, m2, t);
        },
      }
    }
    (Self::from_parts(chart, prim, self.den.clone()), Self::from_parts(chart, obstruction, self.den.clone()))
  }

  /// Keeps only the terms selected by `keep`; used for zero-mode projections.
  ///
  /// Only meaningful on denominator-free elements or when `keep` looks at
  /// coordinates the denominators do not involve.
  pub fn filter_terms(&self, keep: impl Fn(&Mono) -> bool) -> Self {
    let num = self.num.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
    Self::from_parts(&self.chart, num, self.den.clone())
  }

  /// Leading rational coefficient (largest monomial), used to normalize outputs.
  pub fn leading_coefficient(&self) -> Option<&BigRational> { self.num.values().next_back() }

  /// Re-homes an expression onto an equal chart (e.g. a freshly parsed copy).
  pub fn rehome(&self, chart: &Arc<ChartModel>) -> Result<Self> {
    self.chart.check_same(chart)?;
    Ok(Self { chart: chart.clone(), num: self.num.clone(), den: self.den.clone() })
  }
}

fn fmt_rational(c: &BigRational) -> String {
  if c.is_integer() {
    c.numer().to_string()
  } else {
    format!("{}/{}", c.numer(), c.denom())
  }
}

fn fmt_mono(chart: &ChartModel, m: &Mono) -> Vec<String> {
  let mut parts = Vec::new();
  for (i, &e) in m.iter().enumerate() {
    let name = &chart.coords()[i].name;
    match chart.kind(i) {
      CoordKind::Flat if e == 1 => parts.push(name.clone()),
      CoordKind::Flat if e > 1 => parts.push(format!("{name}^{e}")),
      CoordKind::Periodic if e == 1 => parts.push(format!("cos({name})")),
      CoordKind::Periodic if e > 1 => parts.push(format!("cos({e}*{name})")),
      CoordKind::Periodic if e == -1 => parts.push(format!("sin({name})")),
      CoordKind::Periodic if e < -1 => parts.push(format!("sin({}*{name})", -e)),
      _ => {},
    }
  }
  parts
}

/// Formats a numerator as a sum, highest monomials first.
pub(crate) fn fmt_numer(chart: &ChartModel, n: &Numer) -> String {
  if n.is_empty() {
    return "0".into();
  }
  let mut out = String::new();
  for (k, (m, c)) in n.iter().rev().enumerate() {
    let parts = fmt_mono(chart, m);
    let neg = c.is_negative();
    let a = c.abs();
    if k == 0 {
      if neg {
        out.push('-');
      }
    } else {
      out.push_str(if neg { " - " } else { " + " });
    }
    if parts.is_empty() {
      out.push_str(&fmt_rational(&a));
    } else {
      if !a.is_one() {
        out.push_str(&fmt_rational(&a));
        out.push('*');
      }
      out.push_str(&parts.join("*"));
    }
  }
  out
}

impl fmt::Display for ScalarExpr {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let num = fmt_numer(&self.chart, &self.num);
    if !self.has_denominator() {
      return write!(f, "{num}");
    }
    let mut dens = Vec::new();
    for (j, &e) in self.den.iter().enumerate() {
      if e == 0 {
        continue;
      }
      let d = fmt_numer(&self.chart, &self.chart.denominators()[j]);
      let d = if self.chart.denominators()[j].len() > 1 || d.contains('*') { format!("({d})") } else { d };
      dens.push(if e == 1 { d } else { format!("{d}^{e}") });
    }
    let num = if self.num.len() > 1 { format!("({num})") } else { num };
    if dens.len() == 1 {
      write!(f, "{num}/{}", dens[0])
    } else {
      write!(f, "{num}/({})", dens.join("*"))
    }
  }
}

macro_rules! binop {
  ($trait:ident, $method:ident, $body:ident) => {
    impl $trait<&ScalarExpr> for &ScalarExpr {
      type Output = ScalarExpr;

      fn $method(self, rhs: &ScalarExpr) -> ScalarExpr { self.$body(rhs).expect("scalar operands on different charts") }
    }
    impl $trait<ScalarExpr> for ScalarExpr {
      type Output = ScalarExpr;

      fn $method(self, rhs: ScalarExpr) -> ScalarExpr { (&self).$method(&rhs) }
    }
  };
}

binop!(Add, add, try_add);
binop!(Mul, mul, try_mul);

impl Sub<&ScalarExpr> for &ScalarExpr {
  type Output = ScalarExpr;

  fn sub(self, rhs: &ScalarExpr) -> ScalarExpr { self + &(-rhs) }
}

impl Sub<ScalarExpr> for ScalarExpr {
  type Output = ScalarExpr;

  fn sub(self, rhs: ScalarExpr) -> ScalarExpr { &self - &rhs }
}

impl Neg for &ScalarExpr {
  type Output = ScalarExpr;

  fn neg(self) -> ScalarExpr { self.scale(&-BigRational::one()) }
}

impl Neg for ScalarExpr {
  type Output = ScalarExpr;

  fn neg(self) -> ScalarExpr { -&self }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalars::chart::CoordKind::{Flat, Periodic};

  fn chart() -> Arc<ChartModel> {
    ChartModel::from_spec("c", &[("x", Flat), ("y", Flat), ("t", Periodic), ("s", Periodic)]).unwrap()
  }

  #[test]
  fn cos_squared_rewrites_to_fourier_basis() {
    let c = chart();
    let cos = ScalarExpr::trig(&c, "t", false, 1).unwrap();
    let sq = &cos * &cos;
    let expected = &ScalarExpr::constant(&c, BigRational::new(1.into(), 2.into()))
      + &ScalarExpr::trig(&c, "t", false, 2).unwrap().scale(&BigRational::new(1.into(), 2.into()));
    assert_eq!(sq, expected);
    assert_eq!(sq.to_string(), "1/2*cos(2*t) + 1/2");
  }

  #[test]
  fn pythagorean_identity_is_zero() {
    let c = chart();
    let s = ScalarExpr::trig(&c, "t", true, 1).unwrap();
    let co = ScalarExpr::trig(&c, "t", false, 1).unwrap();
    let e = &(&(&s * &s) + &(&co * &co)) - &ScalarExpr::one(&c);
    assert!(e.is_zero());
  }

  #[test]
  fn ring_identities() {
    let c = chart();
    let x = ScalarExpr::coordinate(&c, "x").unwrap();
    let y = ScalarExpr::coordinate(&c, "y").unwrap();
    assert!((&(&x * &y) - &(&y * &x)).is_zero());
    let one = ScalarExpr::one(&c);
    let lhs = (&x + &one).pow(2);
    let rhs = &(&(&x * &x) + &x.scale_int(2)) + &one;
    assert!((&lhs - &rhs).is_zero());
    assert!(ScalarExpr::zero(&c).try_mul(&x).unwrap().is_zero());
    assert!(!(&x - &y).is_zero());
  }

  #[test]
  fn partials() {
    let c = chart();
    let x = ScalarExpr::coordinate(&c, "x").unwrap();
    let y = ScalarExpr::coordinate(&c, "y").unwrap();
    let f = &(&x * &x) * &y;
    assert_eq!(f.partial("x").unwrap(), (&x * &y).scale_int(2));
    let s = ScalarExpr::trig(&c, "t", true, 1).unwrap();
    assert_eq!(s.partial("t").unwrap(), ScalarExpr::trig(&c, "t", false, 1).unwrap());
    assert!(matches!(f.partial("w"), Err(Error::UnknownCoordinate(_))));
  }

  #[test]
  fn inverse_of_declared_denominator_and_power_rule() {
    let base = ChartModel::from_spec("uv", &[("u", Flat), ("v", Flat)]).unwrap();
    let v0 = ScalarExpr::coordinate(&base, "v").unwrap();
    let c = base.localize(&[v0]).unwrap();
    let v = ScalarExpr::coordinate(&c, "v").unwrap();
    let inv = v.try_inverse().unwrap();
    assert_eq!(&inv * &v, ScalarExpr::one(&c));
    let d = inv.partial("v").unwrap();
    assert_eq!(d, -(&inv * &inv));
    assert_eq!(d.to_string(), "-1/v^2");
    let u = ScalarExpr::coordinate(&c, "u").unwrap();
    assert!(matches!(u.try_inverse(), Err(Error::UndeclaredDenominator(_))));
    // (u v + v^2) / v = u + v
    let e = &(&(&u * &v) + &(&v * &v)) * &inv;
    assert_eq!(e, &u + &v);
  }

  #[test]
  fn sphere_denominator_cancels() {
    let base = ChartModel::from_spec("r3", &[("x", Flat), ("y", Flat), ("z", Flat)]).unwrap();
    let r2 = ["x", "y", "z"]
      .iter()
      .map(|n| ScalarExpr::coordinate(&base, n).unwrap().pow(2))
      .fold(ScalarExpr::zero(&base), |a, b| &a + &b);
    let c = base.localize(&[r2]).unwrap();
    let inv = ScalarExpr::inverse_denominator(&c, 0);
    let x = ScalarExpr::coordinate(&c, "x").unwrap();
    let y = ScalarExpr::coordinate(&c, "y").unwrap();
    let z = ScalarExpr::coordinate(&c, "z").unwrap();
    let sum = &(&(&x * &x) + &(&y * &y)) + &(&z * &z);
    assert_eq!(&sum * &inv, ScalarExpr::one(&c));
    assert_eq!(ScalarExpr::denominator(&c, 0).try_inverse().unwrap(), inv);
  }

  #[test]
  fn trig_of_flat_coordinate_is_rejected() {
    let c = chart();
    assert!(matches!(ScalarExpr::trig(&c, "x", false, 1), Err(Error::TrigOfFlat(_))));
  }

  #[test]
  fn angle_addition() {
    let c = chart();
    let t = c.index_of("t").unwrap();
    let s = c.index_of("s").unwrap();
    let lhs = ScalarExpr::trig_of_combination(&c, &[(t, 1), (s, 1)], true).unwrap();
    for p in [[0.0, 0.0, 0.3, 1.1], [0.0, 0.0, -2.0, 0.7]] {
      assert!((lhs.eval(&p) - (p[2] + p[3]).sin()).abs() < 1e-12);
    }
  }

  #[test]
  fn antiderivatives() {
    let c = chart();
    let x = ScalarExpr::coordinate(&c, "x").unwrap();
    let y = ScalarExpr::coordinate(&c, "y").unwrap();
    let (p, o) = y.antiderivative(0);
    assert_eq!(p, &x * &y);
    assert!(o.is_zero());
    let ct = ScalarExpr::trig(&c, "t", false, 1).unwrap();
    let (p, o) = (&ct * &y).antiderivative(2);
    assert_eq!(p, &ScalarExpr::trig(&c, "t", true, 1).unwrap() * &y);
    assert!(o.is_zero());
    let (p, o) = y.antiderivative(2);
    assert!(p.is_zero());
    assert_eq!(o, y);
  }
}
