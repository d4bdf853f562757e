use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Verification`] to exit code 2 and everything else
/// to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("group too large to materialize: more than {0} elements")]
    TooLarge(usize),

    #[error("constraint system is unbounded: {0}")]
    Unbounded(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that indicate an implementation bug rather than a
    /// rejected input.
    pub fn is_verification(&self) -> bool {
        matches!(self, Error::Verification(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
