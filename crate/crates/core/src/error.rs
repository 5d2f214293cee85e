use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("column `{column}` has no present values; cannot impute a mean")]
    AllMissing { column: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("insufficient positives: {0}")]
    InsufficientPositives(String),

    #[error("invalid hyperparameters for {kind}: {message}")]
    InvalidParams { kind: String, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("feature sets differ between `{source_name}` and `{target_name}`")]
    FeatureMismatch {
        source_name: String,
        target_name: String,
    },

    #[error("sub-scenario {id} ({abbreviation}) out of scope: only Inter SD_iD (1.2) pairs are run")]
    ScenarioGuard { id: String, abbreviation: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
