use thiserror::Error;

/// Errors raised by the estimation and risk routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A support point outside the family's support type.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution parameter, threshold, or replicate count out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A (family, direction) or (loss, method) pairing with no formula.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("length mismatch: {params} parameters for {observations} observations")]
    LengthMismatch { params: usize, observations: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
