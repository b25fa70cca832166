use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(String),

    #[error("invalid run config: {0}")]
    InvalidConfig(String),

    #[error("schedule dimensions {got} do not match instance {expected}")]
    DimensionMismatch { expected: String, got: String },

    #[error("unknown algorithm variant `{0}`")]
    UnknownVariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
