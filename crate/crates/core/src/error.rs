//! Crate-wide error type and exit-code policy.
//!
//! Errors fall into three recoverable classes plus one unrecoverable one:
//!
//! * [`Error::Parse`] / [`Error::Io`] — the input could not be read or does
//!   not conform to a file format (CLI exit code 2);
//! * [`Error::Domain`] / [`Error::Invalid`] — the input parses but violates a
//!   mathematical precondition, e.g. non-coprime torus parameters or a
//!   differential that does not square to zero (CLI exit code 1);
//! * [`Error::Internal`] — an internal consistency check failed; this always
//!   indicates a bug, never bad input (CLI exit code 3).
//!
//! Arithmetic overflow (exponents or Laurent coefficients) is treated as
//! unrecoverable and panics with a descriptive message; the CLI maps panics
//! to exit code 3.

use crate::complex::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: bad JSON, non-canonical serialization, unknown ids.
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed input that violates a mathematical precondition.
    #[error("{0}")]
    Domain(String),

    /// A chain complex failed validation; the report lists every violation.
    #[error("validation failed:\n{0}")]
    Invalid(ValidationReport),

    /// An internal invariant was violated — a bug, not an input problem.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Process exit code a CLI front end should use for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::Domain(_) | Error::Invalid(_) => 1,
            Error::Internal(_) => 3,
        }
    }
}
