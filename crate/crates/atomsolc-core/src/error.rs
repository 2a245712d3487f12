//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a documented precondition (non-positive segment
    /// duration, zero segment count, branch index out of range, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested quantity is undefined at the degenerate point φ = 0;
    /// callers should use the identity evolution instead.
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    /// Two code paths that must agree produced irreconcilable values, or a
    /// probability left [0, 1] by more than floating-point noise. This is a
    /// bug indicator, never a user error.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    /// The operation is only defined for a finite parameter range (e.g. the
    /// tabulated emission polynomials exist for N = 1..=8).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A spectrum does not contain the qualifying peak the caller asked to
    /// measure.
    #[error("peak not found: {0}")]
    PeakNotFound(String),
}
