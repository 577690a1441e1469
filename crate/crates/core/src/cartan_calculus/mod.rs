//! Exterior calculus on a chart: forms, vector fields, and the derivations
//! `d`, `i(ξ)`, `θ(ξ)`, `i_u` and `d_u`.

mod field;
mod form;
mod vvform;

pub use field::VectorField;
pub use form::{merge_sign, DifferentialForm, Indices};
pub use vvform::VectorValuedOneForm;

pub(crate) use form::{fmt_basis, fmt_scaled, join_signed, sort_sign};
