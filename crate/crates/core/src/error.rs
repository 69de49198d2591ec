use alloc::string::String;

/// Errors raised by the auction library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or inconsistent input data (negative bids, size mismatch, ...).
    #[error("invalid input: {0}")]
    Validation(String),
    /// A rational literal could not be parsed.
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    /// A construction failed its own postcondition. `tag` names the case.
    #[error("invariant violated [{tag}]: {detail}")]
    Invariant { tag: String, detail: String },
    /// The exhaustive search was asked for more than it is configured to do.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl Error {
    pub(crate) fn invariant(tag: &str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            tag: tag.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
