//! Error taxonomy shared by all modules.
//!
//! The split matters for callers: validation-class errors mean the inputs can
//! never work (CLI exit 2), while [`Error::Numeric`] means a computation ran
//! out of budget and carries the achieved estimate alongside its error bound
//! (CLI exit 3).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this material kind.
    #[error("unsupported operation: {operation} is not defined for {kind} materials")]
    Unsupported {
        operation: &'static str,
        kind: &'static str,
    },

    /// Structured input failed validation; each entry names the offending row
    /// or field.
    #[error("validation of {context} failed:\n{}", problems.join("\n"))]
    Validation {
        context: String,
        problems: Vec<String>,
    },

    /// Mutually inconsistent configuration choices (names both sides).
    #[error("configuration error: {0}")]
    Config(String),

    /// Geometry outside the validity region of the requested approximation.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A configuration with no physical content (e.g. vanishing densities).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// A numerical procedure did not converge within its budget. The result
    /// reached so far and the estimated error bound are attached so callers
    /// can decide whether the partial answer is still useful.
    #[error("numeric error in {context}: achieved {achieved:e} with error bound {error_bound:e}: {detail}")]
    Numeric {
        context: &'static str,
        achieved: f64,
        error_bound: f64,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
