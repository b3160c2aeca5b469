use thiserror::Error;

/// Errors raised across loading, model building and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("formulation error: {0}")]
    Formulation(String),

    #[error("import error: {0}")]
    Import(String),

    #[error("enumeration refused: {cells} materialized cells exceed the cap of {cap}")]
    OracleCap { cells: usize, cap: usize },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn unknown(kind: &'static str, id: impl Into<String>) -> Self {
        Error::UnknownId {
            kind,
            id: id.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
