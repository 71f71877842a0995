//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by state construction, optics evaluation, and simulation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// States built over different frequency-mode pairs cannot be compared.
    #[error("frequency mode mismatch: ({0}, {1}) vs ({2}, {3}) nm")]
    ModeMismatch(f64, f64, f64, f64),

    /// A vector expected to be normalized was not (within tolerance).
    #[error("state not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),

    /// A matrix violates the density-matrix invariants.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// A wavelength falls outside a dispersion model's validity range.
    #[error("wavelength {lambda_nm} nm outside validity range [{min_nm}, {max_nm}] nm")]
    WavelengthOutOfRange {
        lambda_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    /// Malformed or inconsistent dispersion data.
    #[error("dispersion data error: {0}")]
    Dispersion(String),

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A linear system could not be solved.
    #[error("singular linear system: {0}")]
    Singular(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
