//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("belief error: {0}")]
    Belief(String),

    #[error("quantized model error: {0}")]
    Quantized(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("policy file `{path}`: {message}")]
    PolicyFormat { path: String, message: String },

    #[error("network file: {0}")]
    NetFormat(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
