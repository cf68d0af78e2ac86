//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} is below the minimum {min} for this construction")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("input is not a unit vector: norm = {norm}")]
    NotUnitVector { norm: f64 },

    #[error("negative time t = {t} is outside the semigroup parameter range")]
    NegativeTime { t: f64 },

    #[error("{what} failed to converge after {iterations} iterations")]
    ConvergenceFailure {
        what: &'static str,
        iterations: usize,
    },

    #[error("zero vector is not admissible here")]
    ZeroVector,

    #[error("phase unwrap aliasing at sample {index}: adjacent jump {jump} reaches pi")]
    UnwrapAliasing { index: usize, jump: f64 },

    #[error(
        "no admissible small-time prefix: the first grid point already violates the 1/2 bound"
    )]
    NoAdmissiblePrefix,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
