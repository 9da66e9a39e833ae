use thiserror::Error;

/// Errors raised by generation, analysis and construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed user input: unsorted seeds, seeds containing an AP, bad syntax.
    #[error("invalid input: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sequence is too short for the requested check.
    #[error("needs more terms: {required} required, {available} available")]
    NeedsMoreTerms { required: usize, available: usize },

    /// The sieve would exceed its memory cap.
    #[error("resource cap exceeded after {completed} terms: {reason}")]
    Resource { completed: usize, reason: String },

    /// A search gave up at one of its configured caps.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// An internal cross-check failed. Always a bug or a false certificate.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// Process exit code used by the CLI and mirrored by the C status codes.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Precondition(_) | Error::Domain(_) | Error::NeedsMoreTerms { .. } => 2,
            Error::Resource { .. } | Error::OutOfRange(_) => 3,
            Error::Inconsistency(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
