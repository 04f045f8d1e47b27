use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is well-formed but exceeds a configured or hard capability cap.
    #[error("capability exceeded: {0}")]
    Capability(String),
    /// A certificate (clique, Hadamard matrix, construction) failed its check.
    #[error("certificate error: {0}")]
    Certificate(String),
    /// Malformed file or serialized input.
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
