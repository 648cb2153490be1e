use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum CsdError {
    /// A point coordinate fell outside the open unit interval.
    #[error("coordinate {value} outside the open interval (0, 1)")]
    DomainViolation { value: f64 },

    /// A model or kernel parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data is malformed (wrong shape, empty, constant column, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A derivative magnitude left the representable f64 range.
    ///
    /// `log_abs` is the natural log of the offending magnitude so callers can
    /// still see how far out of range the value was.
    #[error("magnitude overflow: log|value| = {log_abs}")]
    Overflow { log_abs: f64 },

    /// A quantity that must be numerically meaningful degenerated
    /// (0/0 ratio, negative density, underflowed mixture, ...).
    #[error("numeric degeneracy: {0}")]
    Numeric(String),

    /// The requested operation is not defined for this model family.
    #[error("unsupported model: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CsdError>;
