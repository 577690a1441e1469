pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exact_linalg;
pub mod group_action;
pub mod pfaffian;
pub mod cartan_calculus;
pub mod scalars;
pub mod variational;

pub use error::{Error, Result};
