use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The result is not representable as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),
    /// A linear system could not be solved stably.
    #[error("singular system: {0}")]
    Singular(String),
    /// Structurally invalid input (mismatched lengths, duplicates, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The operation is deliberately not provided for these parameters.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn finite_or_overflow(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!(
            "{what} is not representable ({value})"
        )))
    }
}
