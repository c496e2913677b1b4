use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("cannot parse tropical value {0:?}")]
    ParseValue(String),

    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("invalid word class: {0}")]
    InvalidClass(String),

    #[error("invalid sampler configuration: {0}")]
    InvalidSampler(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("{0}")]
    Precondition(String),

    #[error("path enumeration exceeded the cap of {0} paths")]
    PathOverflow(usize),

    #[error("counterexample at trial {0} did not survive re-evaluation")]
    Revalidation(u64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
