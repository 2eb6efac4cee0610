use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: file is empty or has no data rows", path.display())]
    EmptyFile { path: PathBuf },

    #[error("missing column `{column}` (available: {})", available.join(", "))]
    MissingColumn {
        column: String,
        available: Vec<String>,
    },

    #[error("empty cell at line {line}, column `{column}`")]
    EmptyCell { line: u64, column: String },

    #[error("non-numeric value `{value}` at line {line}, column `{column}`")]
    NonNumeric {
        line: u64,
        column: String,
        value: String,
    },

    #[error("unknown methodology label `{label}` (accepted: {})", accepted.join(", "))]
    UnknownLabel { label: String, accepted: Vec<String> },

    #[error("schema mismatch: missing columns [{}], extra columns [{}]", missing.join(", "), extra.join(", "))]
    SchemaMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("unsupported model format version {found} (supported: {supported})")]
    VersionMismatch { found: u32, supported: u32 },

    #[error("corrupt model file: {0}")]
    CorruptModel(String),

    #[error("repetition with seed {seed} failed: {source}")]
    Repetition {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures caused by the caller's input rather than by the
    /// numerics.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Degenerate(_) | Error::NonFinite(_) => false,
            Error::Repetition { source, .. } => source.is_input_error(),
            _ => true,
        }
    }
}
