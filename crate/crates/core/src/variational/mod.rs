//! The variational bicomplex of a foliated chart `(x^1..x^p; y^1..y^q)` whose
//! leaves are `y = const`: the bigraded spaces `Φ^{r,s}`, the horizontal
//! differential, the quotients `Ξ^r`, the vertical differential and the Euler
//! operator, together with the invariant and equivariant complexes.

mod bigraded;
mod relative;
mod truncation;
mod xi;


use std::fmt;
use std::sync::Arc;

use crate::cartan_calculus::{DifferentialForm, VectorField};
use crate::error::{Error, Result};
use crate::group_action::{ActionSpec, CartanBasis, LieAlgebraSpec};
use crate::pfaffian::{make_splitting, PfaffianSystem, Splitting};
use crate::scalars::{ChartModel, CoordKind};

pub use bigraded::{horizontal_primitive, BigradedForm, HorizontalPrimitive};
pub use relative::{relative_invariance_check, theorem2_check, RelativeInvariance, SlotCondition, Theorem2Report};
pub use truncation::{equivariant_complex, invariant_complex, FormSpace, Truncation, XiSpace};
pub use xi::{euler, TwistedCochain, XiClass};

pub(crate) use truncation::{index_weight, mono_weight};
pub(crate) use xi::{sorted_distinct, structure_coefficient, subsets};

/// A chart split into horizontal coordinates (along the leaves) and vertical
/// ones (constant on the leaves), optionally with an infinitesimal action
/// along the vertical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliatedModel {
  chart: Arc<ChartModel>,
  horizontal: Vec<usize>,
  vertical: Vec<usize>,
  system: PfaffianSystem,
  action: Option<ActionSpec>,
  cartan: Option<CartanBasis>,
}

impl FoliatedModel {
  pub fn new(chart: &Arc<ChartModel>, horizontal: &[&str], vertical: &[&str]) -> Result<Arc<Self>> {
    let h = horizontal.iter().map(|n| chart.index_of(n)).collect::<Result<Vec<_>>>()?;
    let v = vertical.iter().map(|n| chart.index_of(n)).collect::<Result<Vec<_>>>()?;
    let mut all: Vec<usize> = h.iter().chain(&v).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != h.len() + v.len() || all.len() != chart.dim() {
      return Err(Error::InvalidArgument(
        "horizontal and vertical coordinates must partition the chart coordinates".into(),
      ));
    }
    for (k, den) in chart.denominators().iter().enumerate() {
      if den.keys().any(|m| h.iter().any(|&i| m[i] != 0)) {
        return Err(Error::InvalidArgument(format!(
          "declared denominator `{}` depends on a horizontal coordinate",
          chart.denominator_text()[k]
        )));
      }
    }
    let (mut horizontal, mut vertical) = (h, v);
    horizontal.sort_unstable();
    vertical.sort_unstable();
    let gens = vertical.iter().map(|&i| DifferentialForm::coordinate_differential(chart, i)).collect();
    let system = PfaffianSystem::new(chart, gens)?;
    Ok(Arc::new(Self { chart: chart.clone(), horizontal, vertical, system, action: None, cartan: None }))
  }

  /// Attaches the action `Φ(e_i) = fields[i]`.
  ///
  /// The fields must have no horizontal components, must respect the brackets
  /// of `algebra`, preserve the system, and be transversally free.
  pub fn with_action(self: &Arc<Self>, algebra: LieAlgebraSpec, fields: Vec<VectorField>) -> Result<Arc<Self>> {
    for (k, f) in fields.iter().enumerate() {
      self.chart.check_same(f.chart())?;
      if let Some(&i) = self.horizontal.iter().find(|&&i| !f.component(i).is_zero()) {
        return Err(Error::InvalidArgument(format!(
          "action field {} has a component along the horizontal coordinate `{}`",
          algebra.names().get(k).map(String::as_str).unwrap_or("?"),
          self.chart.coords()[i].name
        )));
      }
    }
    let action = ActionSpec::new(algebra, fields, self.system.clone())?;
    let report = action.check_action()?;
    if !report.all_hold() {
      return Err(Error::InvalidArgument(format!("not an infinitesimal action of the algebra: {report:?}")));
    }
    let cartan = action.cartan_basis()?;
    let mut out = (**self).clone();
    out.action = Some(action);
    out.cartan = Some(cartan);
    Ok(Arc::new(out))
  }

  pub fn chart(&self) -> &Arc<ChartModel> { &self.chart }

  pub fn horizontal(&self) -> &[usize] { &self.horizontal }

  pub fn vertical(&self) -> &[usize] { &self.vertical }

  /// `p`, the leaf dimension.
  pub fn p(&self) -> usize { self.horizontal.len() }

  /// `q`, the codimension of the leaves.
  pub fn q(&self) -> usize { self.vertical.len() }

  pub fn system(&self) -> &PfaffianSystem { &self.system }

  pub fn action(&self) -> Option<&ActionSpec> { self.action.as_ref() }

  pub fn require_action(&self) -> Result<&ActionSpec> { self.action.as_ref().ok_or(Error::NoAction) }

  pub fn cartan_basis(&self) -> Option<&CartanBasis> { self.cartan.as_ref() }

  pub fn is_horizontal(&self, i: usize) -> bool { self.horizontal.contains(&i) }

  /// True when some horizontal coordinate is flat. Every top horizontal form is
  /// then `d_H`-exact (integrate along that coordinate), so all `Ξ^r` vanish.
  pub fn has_flat_horizontal(&self) -> bool { self.horizontal.iter().any(|&i| self.chart.kind(i) == CoordKind::Flat) }

  /// `dx^1 ∧ ... ∧ dx^p` as a basis form.
  pub fn horizontal_volume(&self) -> DifferentialForm {
    DifferentialForm::basis(crate::scalars::ScalarExpr::one(&self.chart), &self.horizontal)
  }

  /// `Σ_V ⊕ Σ_H` with `Σ_H = span ∂/∂x` and `Σ_V = Φ(g)` when an action is
  /// attached, `span ∂/∂y` otherwise.
  pub fn splitting(&self) -> Result<Splitting> {
    let sigma_h: Vec<VectorField> =
      self.horizontal.iter().map(|&i| VectorField::coordinate_index(&self.chart, i)).collect();
    let sigma_v: Vec<VectorField> = match &self.action {
      Some(a) => a.fields.clone(),
      None => self.vertical.iter().map(|&i| VectorField::coordinate_index(&self.chart, i)).collect(),
    };
    make_splitting(&self.chart, &sigma_v, &sigma_h)
  }
}

impl fmt::Display for FoliatedModel {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let names = |ix: &[usize]| ix.iter().map(|&i| self.chart.coords()[i].name.clone()).collect::<Vec<_>>().join(", ");
    write!(f, "{} with leaves ({}) over ({})", self.chart.name(), names(&self.horizontal), names(&self.vertical))
  }
}
