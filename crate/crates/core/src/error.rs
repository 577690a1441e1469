use thiserror::Error;

/// Errors raised by the symbolic engine.
///
/// Parser diagnostics live in [`crate::cli::Diagnostic`]; everything else funnels
/// through this enum so that the CLI can report it as a structured object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
  #[error("unknown coordinate `{0}`")]
  UnknownCoordinate(String),
  #[error("`{0}` is not invertible on this chart; declare it with `invertible`")]
  UndeclaredDenominator(String),
  #[error("sin/cos applied to `{0}`, which is not an integer combination of periodic coordinates")]
  TrigOfFlat(String),
  #[error("objects live on different charts (`{0}` vs `{1}`)")]
  ChartMismatch(String, String),
  #[error("invalid chart: {0}")]
  InvalidChart(String),
  #[error("degenerate Pfaffian system: {0}")]
  DegenerateSystem(String),
  #[error("distributions are not complementary: {0}")]
  NotComplementary(String),
  #[error("{what} requires inverting `{denominator}`; declare it invertible on the chart")]
  LocalizationNeeded { what: String, denominator: String },
  #[error("not transverse: {0}")]
  NotTransverse(String),
  #[error("complex violation: {0}")]
  ComplexViolation(String),
  #[error("truncation not closed: {0}")]
  TruncationNotClosed(String),
  #[error("truncation mismatch: {0}")]
  TruncationMismatch(String),
  #[error("no infinitesimal action attached to the model")]
  NoAction,
  #[error("invalid Lie algebra: {0}")]
  InvalidAlgebra(String),
  #[error("invalid representation: {0}")]
  InvalidModule(String),
  #[error("invalid argument: {0}")]
  InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
