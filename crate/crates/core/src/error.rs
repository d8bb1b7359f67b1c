use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the supported domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The graph does not carry the construction the operation expects.
    #[error("structure error: {0}")]
    Structure(String),

    #[error("{what} too large: {actual} exceeds limit {limit}")]
    Size {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("solver error: {0}")]
    Solver(String),

    /// An inequality instance whose side condition fails in the host graph.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
}
