use thiserror::Error;

/// Errors raised by the library. Budget exhaustion is reported in
/// [`RunRecord`](crate::algorithms::RunRecord), not here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("step size {ell} outside [1, {n}]")]
    InvalidStep { ell: usize, n: usize },

    #[error("fitness {f} outside [0, {max}]")]
    InvalidFitness { f: usize, max: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{variant} cannot run on {problem}")]
    IncompatibleProblem {
        variant: &'static str,
        problem: &'static str,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
