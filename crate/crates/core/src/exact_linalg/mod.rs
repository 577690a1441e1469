//! Exact sparse linear algebra over the rationals.
//!
//! Elimination works on integer rows: every row is scaled to a primitive
//! integer vector and reduced by fraction-free (Bareiss) steps, so entries stay
//! bounded by minors of the input.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A sparse matrix with rational entries. No zero entries are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
  rows: usize,
  cols: usize,
  entries: Vec<BTreeMap<usize, BigRational>>,
}

impl fmt::Debug for RationalMatrix {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
    for r in 0..self.rows {
      let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
      writeln!(f, "  [{}]", row.join(", "))?;
    }
    Ok(())
  }
}

impl RationalMatrix {
  pub fn zeros(rows: usize, cols: usize) -> Self { Self { rows, cols, entries: vec![BTreeMap::new(); rows] } }

  pub fn identity(n: usize) -> Self {
    let mut m = Self::zeros(n, n);
    for i in 0..n {
      m.set(i, i, BigRational::one());
    }
    m
  }

  /// Dense construction from integer rows; all rows must have length `cols`.
  pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = Self::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
      assert_eq!(row.len(), cols, "ragged rows");
      for (c, &v) in row.iter().enumerate() {
        m.set(r, c, BigRational::from_integer(v.into()));
      }
    }
    m
  }

  pub fn from_rows(cols: usize, rows: &[Vec<BigRational>]) -> Self {
    let mut m = Self::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
      assert_eq!(row.len(), cols);
      for (c, v) in row.iter().enumerate() {
        m.set(r, c, v.clone());
      }
    }
    m
  }

  pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
    let mut m = Self::zeros(rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
      for (r, v) in col.iter().enumerate() {
        m.set(r, c, v.clone());
      }
    }
    m
  }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn nnz(&self) -> usize { self.entries.iter().map(BTreeMap::len).sum() }

  pub fn get(&self, r: usize, c: usize) -> BigRational { self.entries[r].get(&c).cloned().unwrap_or_else(BigRational::zero) }

  pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
    assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range for {}x{}", self.rows, self.cols);
    if v.is_zero() {
      self.entries[r].remove(&c);
    } else {
      self.entries[r].insert(c, v);
    }
  }

  pub fn add_to(&mut self, r: usize, c: usize, v: &BigRational) {
    let cur = self.get(r, c);
    self.set(r, c, cur + v);
  }

  pub fn row(&self, r: usize) -> &BTreeMap<usize, BigRational> { &self.entries[r] }

  pub fn is_zero(&self) -> bool { self.entries.iter().all(BTreeMap::is_empty) }

  pub fn column(&self, c: usize) -> Vec<BigRational> { (0..self.rows).map(|r| self.get(r, c)).collect() }

  pub fn transpose(&self) -> Self {
    let mut t = Self::zeros(self.cols, self.rows);
    for (r, row) in self.entries.iter().enumerate() {
      for (&c, v) in row {
        t.entries[c].insert(r, v.clone());
      }
    }
    t
  }

  pub fn mul(&self, other: &Self) -> Result<Self> {
    if self.cols != other.rows {
      return Err(Error::InvalidArgument(format!(
        "cannot multiply {}x{} by {}x{}",
        self.rows, self.cols, other.rows, other.cols
      )));
    }
    let mut out = Self::zeros(self.rows, other.cols);
    for (r, row) in self.entries.iter().enumerate() {
      let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
      for (&k, a) in row {
        for (&c, b) in &other.entries[k] {
          *acc.entry(c).or_insert_with(BigRational::zero) += a * b;
        }
      }
      acc.retain(|_, v| !v.is_zero());
      out.entries[r] = acc;
    }
    Ok(out)
  }

  pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(v.len(), self.cols);
    // accumulate over integers: M v = (M_int w) / (L_row * l)
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    self
      .entries
      .iter()
      .map(|row| {
        let lr = row.values().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let sum = row.iter().fold(BigInt::zero(), |acc, (&c, a)| acc + a.numer() * (&lr / a.denom()) * &w[c]);
        BigRational::new(sum, &lr * &l)
      })
      .collect()
  }

  /// Permutes columns: column `c` of the result is column `perm[c]` of `self`.
  pub fn permute_columns(&self, perm: &[usize]) -> Self {
    assert_eq!(perm.len(), self.cols);
    let mut inv = vec![0; self.cols];
    for (new, &old) in perm.iter().enumerate() {
      inv[old] = new;
    }
    let mut out = Self::zeros(self.rows, self.cols);
    for (r, row) in self.entries.iter().enumerate() {
      out.entries[r] = row.iter().map(|(&c, v)| (inv[c], v.clone())).collect();
    }
    out
  }

  pub fn permute_rows(&self, perm: &[usize]) -> Self {
    assert_eq!(perm.len(), self.rows);
    let mut out = Self::zeros(self.rows, self.cols);
    for (new, &old) in perm.iter().enumerate() {
      out.entries[new] = self.entries[old].clone();
    }
    out
  }

  fn echelon(&self, reduce_above: bool) -> Echelon {
    Echelon::bareiss(self.entries.iter().map(int_row).collect(), reduce_above)
  }

  /// Exact rank by fraction-free elimination.
  pub fn rank(&self) -> usize { self.echelon(false).pivots.len() }

  /// A basis of the null space `{x : M x = 0}`, one vector per free column.
  pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
    let e = self.echelon(true);
    let Some(d) = e.pivots.iter().next_back().map(|(c, r)| r[c].clone()) else {
      return (0..self.cols).map(|f| unit(self.cols, f)).collect();
    };
    let d = BigRational::from_integer(d);
    let mut basis = Vec::new();
    for f in (0..self.cols).filter(|c| !e.pivots.contains_key(c)) {
      let mut v = vec![BigRational::zero(); self.cols];
      v[f] = BigRational::one();
      for (pc, row) in &e.pivots {
        if let Some(a) = row.get(&f) {
          v[*pc] = -BigRational::from_integer(a.clone()) / &d;
        }
      }
      basis.push(v);
    }
    basis
  }

  /// Column indices whose columns form a basis of the column space.
  pub fn pivot_columns(&self) -> Vec<usize> { self.echelon(false).pivots.keys().copied().collect() }

  /// A basis of the column space, taken from the columns of `self`.
  pub fn image_basis(&self) -> Vec<Vec<BigRational>> { self.pivot_columns().into_iter().map(|c| self.column(c)).collect() }
}

/// A linear subspace of `ℚ^n` held in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
  ambient: usize,
  /// `(pivot column, row)` with the row normalized to 1 at its pivot and 0 at the other pivots.
  rows: Vec<(usize, BTreeMap<usize, BigRational>)>,
}

impl Subspace {
  pub fn span(ambient: usize, vectors: &[Vec<BigRational>]) -> Self {
    let m = RationalMatrix::from_rows(ambient, vectors);
    let e = m.echelon(true);
    let rows = e
      .pivots
      .into_iter()
      .map(|(c, row)| {
        let p = BigRational::from_integer(row[&c].clone());
        (c, row.into_iter().map(|(k, v)| (k, BigRational::from_integer(v) / &p)).collect())
      })
      .collect();
    Self { ambient, rows }
  }

  pub fn ambient(&self) -> usize { self.ambient }

  pub fn dim(&self) -> usize { self.rows.len() }

  /// The reduced basis vectors.
  pub fn basis(&self) -> Vec<Vec<BigRational>> {
    self
      .rows
      .iter()
      .map(|(_, row)| {
        let mut v = vec![BigRational::zero(); self.ambient];
        for (&k, x) in row {
          v[k] = x.clone();
        }
        v
      })
      .collect()
  }

  /// Coordinates of `v` in [`Subspace::basis`], or `None` when `v` lies outside.
  pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(v.len(), self.ambient);
    let coords: Vec<BigRational> = self.rows.iter().map(|(c, _)| v[*c].clone()).collect();
    let mut rest = v.to_vec();
    for ((_, row), a) in self.rows.iter().zip(&coords) {
      if a.is_zero() {
        continue;
      }
      for (&k, x) in row {
        rest[k] -= a * x;
      }
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
  }

  pub fn contains(&self, v: &[BigRational]) -> bool { self.coordinates(v).is_some() }
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
  let mut v = vec![BigRational::zero(); n];
  v[i] = BigRational::one();
  v
}

fn int_row(row: &BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigInt> {
  let l = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
  let r: BTreeMap<usize, BigInt> = row.iter().map(|(&c, v)| (c, v.numer() * (&l / v.denom()))).collect();
  primitive(r)
}

fn primitive(mut r: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
  let g = r.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
  if !g.is_zero() && !g.is_one() {
    for v in r.values_mut() {
      *v /= &g;
    }
  }
  // fix the sign so that the leading entry is positive
  if r.values().next().is_some_and(|v| v.is_negative()) {
    for v in r.values_mut() {
      *v = -v.clone();
    }
  }
  r
}

/// Rows in echelon form keyed by their leading column.
#[derive(Default)]
struct Echelon {
  pivots: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl Echelon {
  /// Fraction-free elimination: after each step every active row is divided
  /// exactly by the previous pivot, so all entries remain minors of the input.
  ///
  /// With `reduce_above`, finished pivot rows are updated as well
  /// (Gauss–Jordan form); every pivot entry then equals the last pivot.
  fn bareiss(rows: Vec<BTreeMap<usize, BigInt>>, reduce_above: bool) -> Self {
    let mut active: Vec<BTreeMap<usize, BigInt>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
    let mut prev = BigInt::one();
    while !active.is_empty() {
      let col = active.iter().map(|r| *r.keys().next().unwrap()).min().unwrap();
      // cheapest pivot: smallest leading entry, then sparsest row
      let pi = (0..active.len())
        .filter(|&i| active[i].contains_key(&col))
        .min_by_key(|&i| (active[i][&col].bits(), active[i].len()))
        .unwrap();
      let p = active.swap_remove(pi);
      let a = p[&col].clone();
      let done = if reduce_above { pivots.values_mut().collect() } else { Vec::new() };
      for r in active.iter_mut().chain(done) {
        let b = r.remove(&col);
        let mut next: BTreeMap<usize, BigInt> = std::mem::take(r).into_iter().map(|(c, v)| (c, v * &a)).collect();
        if let Some(b) = b {
          for (&c, v) in p.range(col + 1..) {
            *next.entry(c).or_insert_with(BigInt::zero) -= v * &b;
          }
        }
        next.retain(|_, v| !v.is_zero());
        for v in next.values_mut() {
          debug_assert!((&*v % &prev).is_zero(), "Bareiss division must be exact");
          *v /= &prev;
        }
        *r = next;
      }
      active.retain(|r| !r.is_empty());
      prev = a;
      pivots.insert(col, p);
    }
    Self { pivots }
  }
}

/// `dim ker(d_out) − rank(d_in)` at the middle position of `d_in`, `d_out`.
///
/// `d_in` maps into the middle space (its row count is the middle dimension)
/// and `d_out` maps out of it. The composite must vanish.
pub fn cohomology_dim(d_in: &RationalMatrix, d_out: &RationalMatrix) -> Result<usize> {
  if d_out.cols() != d_in.rows() {
    return Err(Error::InvalidArgument(format!(
      "middle dimensions disagree: d_in has {} rows, d_out has {} columns",
      d_in.rows(),
      d_out.cols()
    )));
  }
  if !d_out.mul(d_in)?.is_zero() {
    return Err(Error::ComplexViolation("composite of consecutive differentials is nonzero".into()));
  }
  let (r_out, r_in) = rayon::join(|| d_out.rank(), || d_in.rank());
  Ok(d_out.cols() - r_out - r_in)
}

#[cfg(test)]
mod tests {
  use super::*;
  use rand::{Rng, SeedableRng};
  use rand_chacha::ChaCha8Rng;

  fn q(v: i64) -> BigRational { BigRational::from_integer(v.into()) }

  #[test]
  fn ranks() {
    assert_eq!(RationalMatrix::identity(3).rank(), 3);
    assert_eq!(RationalMatrix::zeros(4, 2).rank(), 0);
    assert_eq!(RationalMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
  }

  #[test]
  fn kernels_and_images() {
    assert_eq!(RationalMatrix::from_int_rows(&[vec![1, 1]]).kernel_basis(), vec![vec![q(-1), q(1)]]);
    assert!(RationalMatrix::identity(3).kernel_basis().is_empty());
    assert_eq!(RationalMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]]).image_basis(), vec![vec![q(1), q(0)]]);
  }

  #[test]
  fn subspace_coordinates() {
    let s = Subspace::span(3, &[vec![q(1), q(1), q(0)], vec![q(2), q(2), q(0)], vec![q(0), q(1), q(1)]]);
    assert_eq!(s.dim(), 2);
    let c = s.coordinates(&[q(1), q(3), q(2)]).unwrap();
    let back: Vec<BigRational> =
      (0..3).map(|k| s.basis().iter().zip(&c).map(|(b, a)| &b[k] * a).sum()).collect();
    assert_eq!(back, vec![q(1), q(3), q(2)]);
    assert!(!s.contains(&[q(1), q(0), q(0)]));
  }

  #[test]
  fn cohomology_positions() {
    let z_in = RationalMatrix::zeros(3, 0);
    let z_out = RationalMatrix::zeros(0, 3);
    assert_eq!(cohomology_dim(&z_in, &z_out).unwrap(), 3);
    // 0 -> Q --id--> Q -> 0 is exact in the middle
    let id = RationalMatrix::identity(1);
    assert_eq!(cohomology_dim(&id, &RationalMatrix::zeros(0, 1)).unwrap(), 0);
    let bad = cohomology_dim(&id, &id);
    assert!(matches!(bad, Err(Error::ComplexViolation(_))));
  }

  fn random_sparse(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(rows, cols);
    let density = rng.gen_range(0.05..0.5);
    for r in 0..rows {
      for c in 0..cols {
        if rng.gen_bool(density) {
          m.set(r, c, BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into()));
        }
      }
    }
    // planted dependencies
    if rows > 2 && rng.gen_bool(0.5) {
      let a = rng.gen_range(0..rows);
      let b = rng.gen_range(0..rows);
      let row: Vec<BigRational> = (0..cols).map(|c| m.get(a, c) * q(2) - m.get(b, c)).collect();
      let t = rng.gen_range(0..rows);
      for (c, v) in row.into_iter().enumerate() {
        m.set(t, c, v);
      }
    }
    m
  }

  #[test]
  fn rank_nullity_on_random_sparse_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
      let (r, c) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
      let m = random_sparse(&mut rng, r, c);
      let ker = m.kernel_basis();
      assert_eq!(ker.len() + m.rank(), c);
      for v in &ker {
        assert!(m.mul_vec(v).iter().all(Zero::is_zero));
      }
      let img = m.image_basis();
      assert_eq!(img.len(), m.rank());
      assert_eq!(RationalMatrix::from_columns(r, &img).rank(), img.len());
      assert_eq!(m.transpose().rank(), m.rank());
    }
  }

  #[test]
  fn cohomology_is_invariant_under_permuting_the_middle_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
      let n = rng.gen_range(2..12);
      // d_in = projection onto a random subspace, d_out kills its image
      let k = rng.gen_range(1..8);
      let a = random_sparse(&mut rng, n, k);
      let ker_t = a.transpose().kernel_basis();
      let d_out = RationalMatrix::from_columns(n, &ker_t).transpose();
      let h = cohomology_dim(&a, &d_out).unwrap();
      let mut perm: Vec<usize> = (0..n).collect();
      for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
      }
      let h2 = cohomology_dim(&a.permute_rows(&perm), &d_out.permute_columns(&perm)).unwrap();
      assert_eq!(h, h2);
    }
  }
}
