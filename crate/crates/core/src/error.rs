//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Vector/matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Instance data violates an ingestion invariant (bounds, norms, finiteness).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A caller-supplied parameter is out of range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A NaN or infinity appeared where the solver requires finite values.
    #[error("non-finite value produced during {0}")]
    NonFinite(&'static str),

    /// An exact-enumeration oracle was asked for a problem above its size cap.
    #[error("enumeration size cap exceeded: {0}")]
    CapExceeded(String),

    /// An instance/solution/certificate document failed to parse or validate.
    #[error("parse error: {0}")]
    Parse(String),

    /// The current circuit-imbalance guess is too small for a guarantee to
    /// hold. The driver reacts by doubling the guess; callers that invoke the
    /// staged routines directly see it as an ordinary error.
    #[error("kappa guess too small: {0}")]
    KappaTooSmall(String),
}
