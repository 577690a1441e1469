//! Monomials of the coefficient ring and their multiplication rule.
//!
//! A [`Mono`] stores one integer per chart coordinate. For a flat coordinate the
//! entry is the exponent (`>= 0`). For a periodic coordinate it encodes an element
//! of the real Fourier basis: `k >= 0` stands for `cos(k t)` (so `0` is the unit)
//! and `k < 0` stands for `sin(|k| t)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::chart::{ChartModel, CoordKind};

pub type Mono = SmallVec<[i32; 6]>;

/// Sparse sum of monomials with rational coefficients. No zero coefficients are stored.
pub type Numer = BTreeMap<Mono, BigRational>;

/// Fourier basis element for `kind(k t)` with `k` of either sign, normalized.
///
/// Returns `None` for `sin(0)`, otherwise the sign and the stored code.
pub fn fourier(is_sin: bool, k: i64) -> Option<(i8, i32)> {
  if is_sin {
    match k.signum() {
      0 => None,
      1 => Some((1, -(k as i32))),
      _ => Some((-1, k as i32)),
    }
  } else {
    Some((1, k.unsigned_abs() as i32))
  }
}

/// Product of two Fourier basis elements of the same angle, as at most two
/// signed half-weighted basis elements.
fn trig_product(a: i32, b: i32) -> SmallVec<[(i8, i32); 2]> {
  let mut out = SmallVec::new();
  if a == 0 {
    out.push((1, b));
    return out;
  }
  if b == 0 {
    out.push((1, a));
    return out;
  }
  let (sa, p) = (a < 0, a.unsigned_abs() as i64);
  let (sb, q) = (b < 0, b.unsigned_abs() as i64);
  // (is_sin, frequency, sign) pairs before normalization
  let raw: [(bool, i64, i8); 2] = match (sa, sb) {
    (false, false) => [(false, p - q, 1), (false, p + q, 1)],
    (true, true) => [(false, p - q, 1), (false, p + q, -1)],
    (true, false) => [(true, p + q, 1), (true, p - q, 1)],
    (false, true) => [(true, p + q, 1), (true, p - q, -1)],
  };
  for (is_sin, k, s) in raw {
    if let Some((sign, code)) = fourier(is_sin, k) {
      out.push((s * sign, code));
    }
  }
  out
}

/// Multiplies two monomials. Each output carries a sign and the number of
/// factors `1/2` produced by product-to-sum rewriting.
pub fn mono_mul(chart: &ChartModel, a: &Mono, b: &Mono) -> SmallVec<[(i8, u32, Mono); 4]> {
  let mut acc: SmallVec<[(i8, u32, Mono); 4]> = SmallVec::new();
  let mut base = a.clone();
  let mut periodic = SmallVec::<[usize; 4]>::new();
  for (i, c) in chart.coords().iter().enumerate() {
    match c.kind {
      CoordKind::Flat => base[i] += b[i],
      CoordKind::Periodic => periodic.push(i),
    }
  }
  acc.push((1, 0, base));
  for i in periodic {
    let (x, y) = (a[i], b[i]);
    if y == 0 {
      continue;
    }
    let parts = trig_product(x, y);
    let halves = u32::from(x != 0);
    let mut next = SmallVec::new();
    for (sign, h, m) in acc {
      for &(s, code) in &parts {
        let mut m2 = m.clone();
        m2[i] = code;
        next.push((sign * s, h + halves, m2));
      }
    }
    acc = next;
  }
  acc
}

pub fn numer_add_term(n: &mut Numer, m: Mono, c: BigRational) {
  if c.is_zero() {
    return;
  }
  match n.entry(m) {
    std::collections::btree_map::Entry::Vacant(e) => {
      e.insert(c);
    },
    std::collections::btree_map::Entry::Occupied(mut e) => {
      *e.get_mut() += c;
      if e.get().is_zero() {
        e.remove();
      }
    },
  }
}

pub fn numer_add(a: &Numer, b: &Numer) -> Numer {
  let (mut out, other) = if a.len() >= b.len() { (a.clone(), b) } else { (b.clone(), a) };
  for (m, c) in other {
    numer_add_term(&mut out, m.clone(), c.clone());
  }
  out
}

pub fn numer_scale(a: &Numer, c: &BigRational) -> Numer {
  if c.is_zero() {
    return Numer::new();
  }
  a.iter().map(|(m, x)| (m.clone(), x * c)).collect()
}

pub fn numer_mul(chart: &ChartModel, a: &Numer, b: &Numer) -> Numer {
  let mut out = Numer::new();
  let half = BigRational::new(1.into(), 2.into());
  for (ma, ca) in a {
    for (mb, cb) in b {
      let c = ca * cb;
      for (sign, halves, m) in mono_mul(chart, ma, mb) {
        let mut t = c.clone();
        for _ in 0..halves {
          t *= &half;
        }
        if sign < 0 {
          t = -t;
        }
        numer_add_term(&mut out, m, t);
      }
    }
  }
  out
}

pub fn numer_pow(chart: &ChartModel, a: &Numer, e: u32) -> Numer {
  let mut out = numer_one(chart.dim());
  for _ in 0..e {
    out = numer_mul(chart, &out, a);
  }
  out
}

pub fn numer_one(dim: usize) -> Numer {
  let mut n = Numer::new();
  n.insert(SmallVec::from_elem(0, dim), BigRational::one());
  n
}

/// Partial derivative of a numerator with respect to coordinate `i`.
pub fn numer_partial(chart: &ChartModel, a: &Numer, i: usize) -> Numer {
  let mut out = Numer::new();
  let periodic = chart.coords()[i].kind == CoordKind::Periodic;
  for (m, c) in a {
    let e = m[i];
    if periodic {
      if e == 0 {
        continue;
      }
      let mut m2 = m.clone();
      m2[i] = -e;
      // d/dt cos(kt) = -k sin(kt); d/dt sin(kt) = k cos(kt)
      let k = BigRational::from_integer(e.unsigned_abs().into());
      let t = if e > 0 { -(c * k) } else { c * k };
      numer_add_term(&mut out, m2, t);
    } else if e > 0 {
      let mut m2 = m.clone();
      m2[i] = e - 1;
      numer_add_term(&mut out, m2, c * BigRational::from_integer(e.into()));
    }
  }
  out
}

/// Graded-lex comparison on the flat exponents only.
fn flat_cmp(chart: &ChartModel, a: &Mono, b: &Mono) -> std::cmp::Ordering {
  let deg = |m: &Mono| -> i64 { chart.flat_indices().iter().map(|&i| m[i] as i64).sum() };
  deg(a).cmp(&deg(b)).then_with(|| {
    for &i in chart.flat_indices() {
      match a[i].cmp(&b[i]) {
        std::cmp::Ordering::Equal => {},
        o => return o,
      }
    }
    std::cmp::Ordering::Equal
  })
}

/// Exact division of `a` by a polynomial `d` in the flat coordinates.
///
/// `d` must not involve periodic coordinates. Returns `None` when `d` does not
/// divide `a`. The Fourier part of `a` is carried along untouched, so the
/// division runs independently on each Fourier component.
pub fn numer_div_exact(chart: &ChartModel, a: &Numer, d: &Numer) -> Option<Numer> {
  if a.is_empty() {
    return Some(Numer::new());
  }
  let lead_d = d.keys().max_by(|x, y| flat_cmp(chart, x, y))?.clone();
  let lead_c = d[&lead_d].clone();
  let periodic: Vec<usize> =
    (0..chart.dim()).filter(|&i| chart.coords()[i].kind == CoordKind::Periodic).collect();
  let key = |m: &Mono| -> SmallVec<[i32; 4]> { periodic.iter().map(|&i| m[i]).collect() };

  let mut groups: BTreeMap<SmallVec<[i32; 4]>, Numer> = BTreeMap::new();
  for (m, c) in a {
    groups.entry(key(m)).or_default().insert(m.clone(), c.clone());
  }
  let mut quotient = Numer::new();
  for (_, mut rest) in groups {
    while !rest.is_empty() {
      let lead = rest.keys().max_by(|x, y| flat_cmp(chart, x, y)).unwrap().clone();
      let mut shift = lead.clone();
      for &i in chart.flat_indices() {
        shift[i] -= lead_d[i];
        if shift[i] < 0 {
          return None;
        }
      }
      let coef = &rest[&lead] / &lead_c;
      for (md, cd) in d {
        let mut m = shift.clone();
        for &i in chart.flat_indices() {
          m[i] += md[i];
        }
        numer_add_term(&mut rest, m, -(&coef * cd));
      }
      numer_add_term(&mut quotient, shift, coef);
    }
  }
  Some(quotient)
}

pub fn numer_is_constant(a: &Numer) -> bool {
  a.is_empty() || (a.len() == 1 && a.keys().next().unwrap().iter().all(|&e| e == 0))
}

pub fn numer_constant(a: &Numer) -> Option<BigRational> {
  if a.is_empty() {
    return Some(BigRational::zero());
  }
  if numer_is_constant(a) {
    return a.values().next().cloned();
  }
  None
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn trig_products_follow_product_to_sum() {
    // cos(t) cos(t) = 1/2 + 1/2 cos(2t)
    let p = trig_product(1, 1);
    assert_eq!(p.as_slice(), &[(1, 0), (1, 2)]);
    // sin(t) sin(t) = 1/2 - 1/2 cos(2t)
    let p = trig_product(-1, -1);
    assert_eq!(p.as_slice(), &[(1, 0), (-1, 2)]);
    // sin(t) cos(t) = 1/2 sin(2t)
    let p = trig_product(-1, 1);
    assert_eq!(p.as_slice(), &[(1, -2)]);
    // cos(t) sin(2t) = 1/2 sin(3t) + 1/2 sin(t)
    let p = trig_product(1, -2);
    assert_eq!(p.as_slice(), &[(1, -3), (1, -1)]);
  }

  #[test]
  fn sine_of_zero_frequency_is_dropped() {
    assert_eq!(fourier(true, 0), None);
    assert_eq!(fourier(true, -3), Some((-1, -3)));
    assert_eq!(fourier(false, -3), Some((1, 3)));
  }
}
