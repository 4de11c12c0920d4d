use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order alpha = {0} is outside [1, 2)")]
    AlphaOutOfRange(f64),

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial must have degree at least 1")]
    ZeroDegree,

    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("imaginary part has a zero leading coefficient; the generalized Hurwitz test does not apply")]
    DegenerateLeadingCoefficient,

    #[error("eigenvalue iteration did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("order {got} is not supported (expected {min}..={max})")]
    UnsupportedOrder { got: usize, min: usize, max: usize },

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no bracket: {0}")]
    NoBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;
