//! The exact coefficient ring: localized polynomials over the rationals in the
//! flat coordinates, tensored with real trigonometric polynomials in the
//! periodic ones.

mod chart;
mod expr;
mod monomial;
mod raw;

pub use chart::{ChartModel, CoordKind, Coordinate};
pub use expr::ScalarExpr;
pub use monomial::{Mono, Numer};
pub use raw::{angle_combination, normalize, RawScalar};

