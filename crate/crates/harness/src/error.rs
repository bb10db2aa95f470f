use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot parse config: {0}")]
    ConfigParse(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("bad parameter `{key}`: {detail}")]
    Param { key: String, detail: String },
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("report serialization: {0}")]
    Serialize(String),
    #[error(transparent)]
    Core(#[from] hardyspace::Error),
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Serialize(e.to_string())
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::Serialize(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
