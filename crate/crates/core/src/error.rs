use thiserror::Error;

/// Errors raised by the numeric and decision routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid LP problem: {0}")]
    InvalidProblem(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    /// `prefix` is the 1-based length of the first partial sum that fails.
    #[error("not majorized: partial sum of the first {prefix} target entries exceeds the source")]
    NotMajorized { prefix: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("entropy axiom violated on pair {pair}: {detail}")]
    AxiomViolation { pair: usize, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
