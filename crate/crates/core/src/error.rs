use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Domain`] and [`Error::Format`] to exit status 2 and
/// [`Error::Numerical`] to exit status 3.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("{0}")]
    Domain(String),

    /// An iterative method did not converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A state document is malformed or fails validation.
    #[error("invalid state: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
