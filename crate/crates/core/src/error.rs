//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix expected to be Hermitian deviates beyond tolerance.
    #[error("matrix is not Hermitian: max |m[i][j] - conj(m[j][i])| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// A matrix failed density-matrix validation (trace, positivity).
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// A rate integral diverges at or before the requested time.
    #[error("decay-rate integral is singular on [0, {t}]")]
    Singularity { t: f64 },

    /// erf argument outside the supported disc (or an exp-scaled branch
    /// would overflow).
    #[error("erf argument out of range: |z| = {modulus:.3e}")]
    ErfOutOfRange { modulus: f64 },

    /// Loschmidt echo below the underflow floor; the decay rate is undefined.
    #[error("Loschmidt echo degenerate at t = {t}: L = {echo:.3e}")]
    DegenerateEcho { t: f64, echo: f64 },

    /// Model parameters produce coincident roots or other degeneracies.
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    /// A physical-consistency check failed; results would be meaningless.
    #[error("model violation: {0}")]
    ModelViolation(String),

    /// Requested feature outside the supported scope.
    #[error("unsupported: {0}")]
    Unsupported(String),
}
