use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("decision variable {index} = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("empty input to {0}")]
    EmptyInput(&'static str),

    #[error("reference grid of {evaluations} evaluations exceeds the cap of {cap}")]
    GridTooLarge { evaluations: u128, cap: u128 },

    #[error("archive full at generation {generation}")]
    ArchiveFull { generation: usize },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("cell trace requested but archive tracing was disabled")]
    TracingDisabled,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("config serialize error: {0}")]
    ConfigSerialize(#[from] toml::ser::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what,
                expected,
                got,
            })
        }
    }
}
