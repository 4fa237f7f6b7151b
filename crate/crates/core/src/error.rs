use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("malformed solution: {0}")]
    MalformedSolution(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("certificate violated: {0}")]
    Certificate(String),

    #[error("solver `{solver}` is not applicable: {reason}")]
    WrongSolver { solver: String, reason: String },

    #[error("no candidate survived the vehicle filter: {0}")]
    NoCandidate(String),

    #[error("instance exceeds oracle limits: {0}")]
    OracleLimit(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
