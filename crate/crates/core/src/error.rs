//! Crate-wide error type.
//!
//! Errors are grouped by how the CLI reports them: fixture/config problems
//! (exit code 2), precision shortfalls (exit code 3) and internal
//! consistency failures (exit code 4).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data (fixture file, CLI configuration) is malformed or fails
    /// validation.
    #[error("fixture/config error: {0}")]
    Fixture(String),

    /// A value is needed beyond the precision it carries, or a division by
    /// something indistinguishable from zero was attempted.
    #[error("precision error: {0}")]
    Precision(String),

    /// A quantity that must exist mathematically could not be produced;
    /// usually indicates a precision fault upstream or a broken fixture.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// Domain errors with well-defined mathematical meaning, e.g. taking a
    /// square root of a non-residue.
    #[error("{0}")]
    Domain(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Fixture(_) | Error::Io(_) | Error::Json(_) | Error::Domain(_) => 2,
            Error::Precision(_) => 3,
            Error::Internal(_) => 4,
        }
    }
}
