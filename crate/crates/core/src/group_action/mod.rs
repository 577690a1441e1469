//! Finite-dimensional Lie algebras acting infinitesimally on a chart, and the
//! invariant coframe dual to a transversally free action.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cartan_calculus::{DifferentialForm, VectorField};
use crate::error::{Error, Result};
use crate::pfaffian::minors::{det, generic_rank};
use crate::pfaffian::{field_matrix, make_splitting, PfaffianSystem};
use crate::scalars::{ChartModel, ScalarExpr};

/// `(i, j, [(k, c)])` for `[e_i, e_j] = Σ c e_k`.
pub type BracketClause = (usize, usize, Vec<(usize, BigRational)>);

/// A Lie algebra by structure constants: `[e_i, e_j] = Σ_k C^k_{ij} e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebraSpec {
  names: Vec<String>,
  /// `c[i][j][k] = C^k_{ij}`
  c: Vec<Vec<Vec<BigRational>>>,
}

impl LieAlgebraSpec {
  /// Builds an algebra from bracket clauses `[e_i, e_j] = Σ coef e_k` for `i ≠ j`;
  /// the opposite brackets follow by antisymmetry, unlisted brackets vanish.
  pub fn new(names: Vec<String>, brackets: &[BracketClause]) -> Result<Self> {
    let q = names.len();
    for (i, n) in names.iter().enumerate() {
      if names[..i].contains(n) {
        return Err(Error::InvalidAlgebra(format!("duplicate basis element `{n}`")));
      }
    }
    let mut c = vec![vec![vec![BigRational::zero(); q]; q]; q];
    let mut seen = vec![vec![false; q]; q];
    for (i, j, rhs) in brackets {
      let (i, j) = (*i, *j);
      if i >= q || j >= q || rhs.iter().any(|(k, _)| *k >= q) {
        return Err(Error::InvalidAlgebra("bracket refers to an unknown basis element".into()));
      }
      if i == j {
        if rhs.iter().any(|(_, v)| !v.is_zero()) {
          return Err(Error::InvalidAlgebra(format!("[{0}, {0}] must vanish", names[i])));
        }
        continue;
      }
      if seen[i][j] {
        return Err(Error::InvalidAlgebra(format!("bracket [{}, {}] given twice", names[i], names[j])));
      }
      seen[i][j] = true;
      seen[j][i] = true;
      for (k, v) in rhs {
        c[i][j][*k] += v;
        c[j][i][*k] -= v;
      }
    }
    let g = Self { names, c };
    if let Some((i, j, k)) = g.jacobi_failure() {
      return Err(Error::InvalidAlgebra(format!(
        "Jacobi identity fails for ({}, {}, {})",
        g.names[i], g.names[j], g.names[k]
      )));
    }
    Ok(g)
  }

  /// Structure constants given directly as `c[i][j][k] = C^k_{ij}`; validated.
  pub fn from_constants(names: Vec<String>, c: Vec<Vec<Vec<BigRational>>>) -> Result<Self> {
    let q = names.len();
    if c.len() != q || c.iter().any(|r| r.len() != q || r.iter().any(|v| v.len() != q)) {
      return Err(Error::InvalidAlgebra("structure constant array has the wrong shape".into()));
    }
    let g = Self { names, c };
    if !g.is_antisymmetric() {
      return Err(Error::InvalidAlgebra("structure constants are not antisymmetric".into()));
    }
    if let Some((i, j, k)) = g.jacobi_failure() {
      return Err(Error::InvalidAlgebra(format!(
        "Jacobi identity fails for ({}, {}, {})",
        g.names[i], g.names[j], g.names[k]
      )));
    }
    Ok(g)
  }

  /// The abelian algebra `ℝ^q` with basis `e1..eq`.
  pub fn abelian(q: usize) -> Self {
    Self { names: (1..=q).map(|i| format!("e{i}")).collect(), c: vec![vec![vec![BigRational::zero(); q]; q]; q] }
  }

  /// `sl(2)` with basis `h, e, f`: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
  pub fn sl2() -> Self {
    let q = |v: i64| BigRational::from_integer(v.into());
    Self::new(
      vec!["h".into(), "e".into(), "f".into()],
      &[(0, 1, vec![(1, q(2))]), (0, 2, vec![(2, q(-2))]), (1, 2, vec![(0, q(1))])],
    )
    .expect("sl2 is a Lie algebra")
  }

  pub fn dim(&self) -> usize { self.names.len() }

  pub fn names(&self) -> &[String] { &self.names }

  pub fn index_of(&self, name: &str) -> Option<usize> { self.names.iter().position(|n| n == name) }

  /// `C^k_{ij}`.
  pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigRational { &self.c[i][j][k] }

  pub fn constants(&self) -> &Vec<Vec<Vec<BigRational>>> { &self.c }

  pub fn is_abelian(&self) -> bool { self.c.iter().flatten().flatten().all(Zero::is_zero) }

  pub fn is_antisymmetric(&self) -> bool {
    let q = self.dim();
    (0..q).all(|i| (0..q).all(|j| (0..q).all(|k| self.c[i][j][k] == -self.c[j][i][k].clone())))
  }

  /// First triple violating `[[e_i,e_j],e_k] + cyclic = 0`.
  pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
    let q = self.dim();
    for i in 0..q {
      for j in i + 1..q {
        for k in j + 1..q {
          for m in 0..q {
            let mut s = BigRational::zero();
            for l in 0..q {
              s += &self.c[i][j][l] * &self.c[l][k][m];
              s += &self.c[j][k][l] * &self.c[l][i][m];
              s += &self.c[k][i][l] * &self.c[l][j][m];
            }
            if !s.is_zero() {
              return Some((i, j, k));
            }
          }
        }
      }
    }
    None
  }

  pub fn jacobi_holds(&self) -> bool { self.jacobi_failure().is_none() }

  /// A copy with one structure constant replaced, bypassing validation (negative controls).
  pub fn with_corrupted_constant(&self, i: usize, j: usize, k: usize, v: BigRational) -> Self {
    let mut g = self.clone();
    g.c[i][j][k] = v.clone();
    g.c[j][i][k] = -v;
    g
  }
}

impl fmt::Display for LieAlgebraSpec {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{{}}}", self.names.join(", "))?;
    let q = self.dim();
    let mut first = true;
    for i in 0..q {
      for j in i + 1..q {
        let terms: Vec<String> = (0..q)
          .filter(|&k| !self.c[i][j][k].is_zero())
          .map(|k| {
            let v = &self.c[i][j][k];
            if v.is_one() {
              self.names[k].clone()
            } else if *v == -BigRational::one() {
              format!("-{}", self.names[k])
            } else {
              format!("{v}*{}", self.names[k])
            }
          })
          .collect();
        if terms.is_empty() {
          continue;
        }
        write!(f, "{} [{}, {}] = {}", if first { " bracket" } else { "," }, self.names[i], self.names[j], terms.join(" + ").replace("+ -", "- "))?;
        first = false;
      }
    }
    Ok(())
  }
}

/// Which sign the structure equation of the invariant coframe uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
  /// `dω^i = Σ_{j<k} c^i_{jk} ω^j ∧ ω^k` with `c = −C`.
  #[default]
  Negated,
  /// The same equation with `c = C`.
  Direct,
}

/// An infinitesimal action `Φ: g → χ(M)` on the leaves of a Pfaffian system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpec {
  pub algebra: LieAlgebraSpec,
  pub fields: Vec<VectorField>,
  pub system: PfaffianSystem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
  /// `[Φ(e_i), Φ(e_j)] = Σ C^k_{ij} Φ(e_k)` for all pairs.
  pub bracket_compatible: bool,
  /// Per basis element: `Φ(e_i)` is an infinitesimal automorphism of the system.
  pub symmetries: Vec<bool>,
  pub jacobi: bool,
}

impl ActionReport {
  pub fn all_hold(&self) -> bool { self.bracket_compatible && self.jacobi && self.symmetries.iter().all(|&b| b) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalityReport {
  /// Condition (i): the action fields are generically independent.
  pub independent: bool,
  /// Condition (ii): together with `Σ` they span the tangent space.
  pub complementary: bool,
  /// Determinant of `[Σ | Φ(g)]`; the action is free and transverse off its zero set.
  pub locus: ScalarExpr,
  pub diagnostic: Option<String>,
}

impl TransversalityReport {
  pub fn holds(&self) -> bool { self.independent && self.complementary }
}

/// The coframe `ω^1..ω^q` in `𝒮` dual to the action fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanBasis {
  pub forms: Vec<DifferentialForm>,
}

/// Result of writing a symmetry in terms of the action fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Decomposition {
  /// `f_i = <ξ, ω^i>`.
  pub coefficients: Vec<ScalarExpr>,
  /// `η = ξ − Σ f_i Φ(e_i)`.
  pub remainder: VectorField,
  /// Index and value of a coefficient that is not a first integral, if any.
  pub violation: Option<(usize, ScalarExpr)>,
  pub remainder_tangent: bool,
}

impl ActionSpec {
  pub fn new(algebra: LieAlgebraSpec, fields: Vec<VectorField>, system: PfaffianSystem) -> Result<Self> {
    if fields.len() != algebra.dim() {
      return Err(Error::InvalidArgument(format!(
        "{} action fields for a {}-dimensional algebra",
        fields.len(),
        algebra.dim()
      )));
    }
    for f in &fields {
      system.chart().check_same(f.chart())?;
    }
    Ok(Self { algebra, fields, system })
  }

  pub fn chart(&self) -> &Arc<ChartModel> { self.system.chart() }

  pub fn check_action(&self) -> Result<ActionReport> {
    let q = self.algebra.dim();
    let chart = self.chart();
    let mut bracket_compatible = true;
    'outer: for i in 0..q {
      for j in i + 1..q {
        let lhs = self.fields[i].lie_bracket(&self.fields[j])?;
        let mut rhs = VectorField::zero(chart);
        for k in 0..q {
          let c = self.algebra.constant(i, j, k);
          if !c.is_zero() {
            rhs = rhs.try_add(&self.fields[k].scale_rational(c))?;
          }
        }
        if lhs != rhs {
          bracket_compatible = false;
          break 'outer;
        }
      }
    }
    let symmetries = self.fields.iter().map(|f| self.system.is_symmetry(f)).collect::<Result<_>>()?;
    Ok(ActionReport { bracket_compatible, symmetries, jacobi: self.algebra.jacobi_holds() })
  }

  pub fn check_transversally_free(&self) -> TransversalityReport {
    let chart = self.chart();
    let q = self.algebra.dim();
    let (rank, _) = generic_rank(chart, &field_matrix(chart, &self.fields), q);
    let independent = rank == q;
    let sigma = self.system.annihilator();
    let n = chart.dim();
    let (complementary, locus) = if sigma.rank() + q != n {
      (false, ScalarExpr::zero(chart))
    } else {
      let all: Vec<VectorField> = sigma.fields().iter().chain(&self.fields).cloned().collect();
      let d = det(chart, &field_matrix(chart, &all));
      (!d.is_zero(), d)
    };
    let diagnostic = match (independent, complementary) {
      (true, true) => None,
      (false, true) => Some("condition (i) fails: the action fields are dependent".into()),
      (true, false) => Some(format!(
        "condition (ii) fails: Σ (rank {}) and Φ(g) (rank {q}) do not span the {n}-dimensional tangent space",
        sigma.rank()
      )),
      (false, false) => Some(format!(
        "conditions (i) and (ii) fail: the action fields have rank {rank} < {q} and do not complement Σ"
      )),
    };
    TransversalityReport { independent, complementary, locus, diagnostic }
  }

  /// The invariant coframe dual to the action fields, vanishing on `Σ`.
  pub fn cartan_basis(&self) -> Result<CartanBasis> {
    let t = self.check_transversally_free();
    if !t.holds() {
      return Err(Error::NotTransverse(t.diagnostic.unwrap_or_default()));
    }
    let sigma = self.system.annihilator();
    let split = make_splitting(self.chart(), &self.fields, sigma.fields()).map_err(|e| match e {
      Error::LocalizationNeeded { denominator, .. } => {
        Error::LocalizationNeeded { what: "Cartan basis".into(), denominator }
      },
      other => other,
    })?;
    Ok(CartanBasis { forms: split.coframe[..self.algebra.dim()].to_vec() })
  }

  /// Writes a symmetry `ξ` as `Σ f_i Φ(e_i) + η` with `η` tangent to `Σ`.
  pub fn lemma2_decomposition(&self, xi: &VectorField) -> Result<Lemma2Decomposition> {
    if !self.system.is_symmetry(xi)? {
      return Err(Error::InvalidArgument(format!("`{xi}` is not a symmetry of the system")));
    }
    let basis = self.cartan_basis()?;
    let mut remainder = xi.clone();
    let mut coefficients = Vec::new();
    let mut violation = None;
    for (i, w) in basis.forms.iter().enumerate() {
      let f = w.pair(xi)?;
      if violation.is_none() && !self.system.is_first_integral(&f)? {
        violation = Some((i, f.clone()));
      }
      remainder = remainder.try_sub(&self.fields[i].scale(&f)?)?;
      coefficients.push(f);
    }
    let remainder_tangent =
      self.system.generators().iter().map(|g| g.pair(&remainder)).collect::<Result<Vec<_>>>()?.iter().all(ScalarExpr::is_zero);
    Ok(Lemma2Decomposition { coefficients, remainder, violation, remainder_tangent })
  }
}

impl CartanBasis {
  /// The right-hand side `Σ_{j<k} c^i_{jk} ω^j ∧ ω^k` of the structure equation.
  pub fn structure_rhs(&self, g: &LieAlgebraSpec, i: usize, convention: SignConvention) -> Result<DifferentialForm> {
    let q = g.dim();
    let chart = self.forms[0].chart();
    let mut rhs = DifferentialForm::zero(chart, 2);
    for j in 0..q {
      for k in j + 1..q {
        let c = g.constant(j, k, i);
        if c.is_zero() {
          continue;
        }
        let c = match convention {
          SignConvention::Negated => -c.clone(),
          SignConvention::Direct => c.clone(),
        };
        rhs = rhs.try_add(&self.forms[j].wedge(&self.forms[k])?.scale_rational(&c))?;
      }
    }
    Ok(rhs)
  }

  /// `dω^i = Σ_{j<k} c^i_{jk} ω^j ∧ ω^k` for every `i`.
  pub fn verify_structure_equation(&self, g: &LieAlgebraSpec, convention: SignConvention) -> Result<bool> {
    if self.forms.len() != g.dim() {
      return Err(Error::InvalidArgument("coframe and algebra dimensions differ".into()));
    }
    if self.forms.is_empty() {
      return Ok(true);
    }
    for (i, w) in self.forms.iter().enumerate() {
      if w.d() != self.structure_rhs(g, i, convention)? {
        return Ok(false);
      }
    }
    Ok(true)
  }
}

#[cfg(test)]
mod tests;
