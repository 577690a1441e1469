//! Determinants, generic ranks and kernels of small matrices over the
//! coefficient ring, decided over its fraction field.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{ChartModel, ScalarExpr};

pub type SMatrix = Vec<Vec<ScalarExpr>>;

/// Determinant of the square submatrix on `rows` × `cols` (Laplace expansion
/// along rows with memoization over column subsets).
pub fn minor(chart: &Arc<ChartModel>, m: &SMatrix, rows: &[usize], cols: &[usize]) -> ScalarExpr {
  let k = rows.len();
  debug_assert_eq!(k, cols.len());
  if k == 0 {
    return ScalarExpr::one(chart);
  }
  // dp[mask] = determinant of rows[k - |mask| ..] against the columns in mask
  let mut dp: Vec<Option<ScalarExpr>> = vec![None; 1 << k];
  dp[0] = Some(ScalarExpr::one(chart));
  for mask in 1usize..(1 << k) {
    let used = mask.count_ones() as usize;
    let r = rows[k - used];
    let mut acc = ScalarExpr::zero(chart);
    let mut sign_pos = 0usize;
    for (j, &c) in cols.iter().enumerate() {
      if mask & (1 << j) == 0 {
        continue;
      }
      let a = &m[r][c];
      let sub = dp[mask & !(1 << j)].as_ref().expect("smaller masks first");
      if !a.is_zero() && !sub.is_zero() {
        let t = a * sub;
        acc = if sign_pos.is_multiple_of(2) { &acc + &t } else { &acc - &t };
      }
      sign_pos += 1;
    }
    dp[mask] = Some(acc);
  }
  dp[(1 << k) - 1].take().expect("full mask")
}

pub fn det(chart: &Arc<ChartModel>, m: &SMatrix) -> ScalarExpr {
  let idx: Vec<usize> = (0..m.len()).collect();
  minor(chart, m, &idx, &idx)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
  let mut out = Vec::new();
  let mut cur = Vec::new();
  fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
      out.push(cur.clone());
      return;
    }
    for i in start..n {
      if n - i < k - cur.len() {
        break;
      }
      cur.push(i);
      rec(i + 1, n, k, cur, out);
      cur.pop();
    }
  }
  rec(0, n, k, &mut cur, &mut out);
  out
}

/// How convenient a pivot minor is: constants first, then units of the
/// localized ring, then anything else by size.
fn pivot_score(d: &ScalarExpr) -> (u8, usize) {
  if d.is_constant() {
    (0, 0)
  } else if d.try_inverse().is_ok() {
    (1, d.num_terms())
  } else {
    (2, d.num_terms())
  }
}

/// A nonzero maximal minor chosen for elimination.
#[derive(Debug, Clone)]
pub struct Pivot {
  pub rows: Vec<usize>,
  pub cols: Vec<usize>,
  pub det: ScalarExpr,
}

/// Generic rank of an `r × c` matrix together with a preferred pivot minor.
pub fn generic_rank(chart: &Arc<ChartModel>, m: &SMatrix, ncols: usize) -> (usize, Pivot) {
  let nrows = m.len();
  for k in (1..=nrows.min(ncols)).rev() {
    let mut best: Option<((u8, usize), Pivot)> = None;
    for rows in subsets(nrows, k) {
      for cols in subsets(ncols, k) {
        let d = minor(chart, m, &rows, &cols);
        if d.is_zero() {
          continue;
        }
        let s = pivot_score(&d);
        if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
          let done = s.0 == 0;
          best = Some((s, Pivot { rows: rows.clone(), cols: cols.clone(), det: d }));
          if done {
            return (k, best.unwrap().1);
          }
        }
      }
    }
    if let Some((_, p)) = best {
      return (k, p);
    }
  }
  (0, Pivot { rows: vec![], cols: vec![], det: ScalarExpr::one(chart) })
}

/// Basis of the generic null space of `m` (columns = unknowns).
///
/// Vectors are built by Cramer's rule without division, so their entries stay
/// in the ring; when the pivot minor is a nonzero constant they are normalized
/// to have a unit entry in the free slot.
pub fn kernel(chart: &Arc<ChartModel>, m: &SMatrix, ncols: usize) -> Vec<Vec<ScalarExpr>> {
  let (k, piv) = generic_rank(chart, m, ncols);
  let scale = piv.det.as_constant().map(|c| ScalarExpr::constant(chart, num_traits::Inv::inv(c)));
  let mut out = Vec::new();
  for j in (0..ncols).filter(|j| !piv.cols.contains(j)) {
    let mut v = vec![ScalarExpr::zero(chart); ncols];
    v[j] = piv.det.clone();
    for t in 0..k {
      // replace pivot column t by column j
      let mut cols = piv.cols.clone();
      cols[t] = j;
      let d = minor(chart, m, &piv.rows, &cols);
      v[piv.cols[t]] = -d;
    }
    if let Some(s) = &scale {
      for x in &mut v {
        *x = &*x * s;
      }
    }
    out.push(v);
  }
  out
}

/// Inverse of a square matrix; the determinant must be a unit of the ring.
#[allow(clippy::needless_range_loop)]
pub fn inverse(chart: &Arc<ChartModel>, m: &SMatrix, what: &str) -> Result<SMatrix> {
  let n = m.len();
  let d = det(chart, m);
  if d.is_zero() {
    return Err(Error::NotComplementary(format!("{what}: determinant vanishes identically")));
  }
  let inv = d
    .try_inverse()
    .map_err(|_| Error::LocalizationNeeded { what: what.to_string(), denominator: d.to_string() })?;
  let all: Vec<usize> = (0..n).collect();
  let mut out = vec![vec![ScalarExpr::zero(chart); n]; n];
  for i in 0..n {
    for j in 0..n {
      // (A^{-1})_{ij} = (-1)^{i+j} M_{ji} / det
      let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
      let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
      let c = minor(chart, m, &rows, &cols);
      let c = if (i + j) % 2 == 0 { c } else { -c };
      out[i][j] = &c * &inv;
    }
  }
  Ok(out)
}

pub fn mat_mul(chart: &Arc<ChartModel>, a: &SMatrix, b: &SMatrix) -> SMatrix {
  let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
  let mut out = vec![vec![ScalarExpr::zero(chart); m]; n];
  for i in 0..n {
    for j in 0..m {
      let mut acc = ScalarExpr::zero(chart);
      for t in 0..k {
        if !a[i][t].is_zero() && !b[t][j].is_zero() {
          acc = &acc + &(&a[i][t] * &b[t][j]);
        }
      }
      out[i][j] = acc;
    }
  }
  out
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::cli::parse_scalar;
  use crate::scalars::CoordKind::Flat;

  fn s(c: &Arc<ChartModel>, t: &str) -> ScalarExpr { parse_scalar(c, t).unwrap() }

  #[test]
  fn determinant_and_inverse() {
    let c = ChartModel::from_spec("r2", &[("x", Flat), ("y", Flat)]).unwrap();
    let m = vec![vec![s(&c, "x"), s(&c, "1")], vec![s(&c, "1"), s(&c, "0")]];
    assert_eq!(det(&c, &m), s(&c, "-1"));
    let inv = inverse(&c, &m, "test").unwrap();
    assert_eq!(inv, vec![vec![s(&c, "0"), s(&c, "1")], vec![s(&c, "1"), s(&c, "-x")]]);
    let sing = vec![vec![s(&c, "x"), s(&c, "y")], vec![s(&c, "x^2"), s(&c, "x*y")]];
    assert!(det(&c, &sing).is_zero());
    assert_eq!(generic_rank(&c, &sing, 2).0, 1);
    let need = vec![vec![s(&c, "x"), s(&c, "0")], vec![s(&c, "0"), s(&c, "1")]];
    assert!(matches!(inverse(&c, &need, "t"), Err(Error::LocalizationNeeded { .. })));
  }

  #[test]
  fn three_by_three_determinant_matches_rule_of_sarrus() {
    let c = ChartModel::from_spec("r3", &[("x", Flat), ("y", Flat), ("z", Flat)]).unwrap();
    let m: SMatrix = [["x", "1", "y"], ["2", "z", "0"], ["y", "x", "3"]]
      .iter()
      .map(|r| r.iter().map(|t| s(&c, t)).collect())
      .collect();
    // x(3z − 0) − 1(6 − 0) + y(2x − yz)
    assert_eq!(det(&c, &m), s(&c, "3*x*z - 6 + 2*x*y - y^2*z"));
  }

  #[test]
  fn kernel_of_contact_row() {
    let c = ChartModel::from_spec("r3", &[("x", Flat), ("y", Flat), ("z", Flat)]).unwrap();
    let m = vec![vec![s(&c, "-y"), s(&c, "0"), s(&c, "1")]];
    let k = kernel(&c, &m, 3);
    assert_eq!(k, vec![vec![s(&c, "1"), s(&c, "0"), s(&c, "y")], vec![s(&c, "0"), s(&c, "1"), s(&c, "0")]]);
  }
}
