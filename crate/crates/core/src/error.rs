use std::path::PathBuf;

use thiserror::Error;

use crate::element::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {id} is not in the ground set of size {n}")]
    InvalidElement { id: ElementId, n: usize },

    #[error("invalid matroid instance: {0}")]
    InvalidInstance(String),

    #[error("element {id} is not a loop but has value {raw}")]
    ZeroValue { id: ElementId, raw: f64 },

    #[error("value {raw} rounds to bucket {bucket}, outside [{min}, {max}]")]
    BucketOutOfRange {
        raw: f64,
        bucket: i64,
        min: i32,
        max: i32,
    },

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("oracle query touched element {id} before it was revealed")]
    DisciplineViolation { id: ElementId },

    #[error("critical tuple rejected: {0}")]
    InvalidTuple(String),

    #[error("critical tree construction stalled on {set:?}: no label applies")]
    TreeConstruction { set: Vec<i32> },

    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
