//! Crate-wide error type.
//!
//! Library routines validate their inputs at the boundary and return
//! [`Error`] instead of panicking. Solver non-convergence is usually
//! reported through result structs rather than errors; the
//! [`Error::Solver`] variant is reserved for callers that cannot proceed
//! without a converged inner solve (e.g. resolvent steps).

use thiserror::Error;

/// Errors produced by geometry, solver, and harness routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Two points (or a point and an operation) belong to different spaces.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// Coordinates fail the membership test for their declared space.
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// A tangent vector is malformed or based at the wrong point.
    #[error("invalid tangent vector: {0}")]
    InvalidTangent(String),

    /// A scalar or structural parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation is not defined on this space (e.g. exp/log on the spider).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// An inner solver failed to converge where convergence is required.
    #[error("solver failure: {0}")]
    Solver(String),

    /// An experiment configuration could not be parsed or resolved.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem or serialization failure in the experiment harness.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
