//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance has no items")]
    EmptyInstance,

    #[error("bin capacity must be at least 1, got {0}")]
    InvalidCapacity(i64),

    #[error("item {index} has non-positive weight {weight}")]
    NonPositiveWeight { index: usize, weight: i64 },

    #[error("item {index} exceeds capacity ({weight} > {capacity})")]
    ItemExceedsCapacity {
        index: usize,
        weight: i64,
        capacity: i64,
    },

    #[error("invalid weight range [{lo}, {hi}] for capacity {capacity}")]
    InvalidWeightRange { lo: i64, hi: i64, capacity: i64 },

    #[error("bin count must be at least 1")]
    InvalidBinCount,

    #[error("penalty vectors sized for {got} bins, model has {expected}")]
    PenaltySizeMismatch { expected: usize, got: usize },

    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{num_vars} variables exceeds the exhaustive search limit of {limit}")]
    TooManyVariables { num_vars: usize, limit: usize },

    #[error("{n} items exceeds the exact solver limit of {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("invalid anneal parameters: {0}")]
    InvalidAnnealParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no records for solver {solver} in class n={n}")]
    EmptyClass { solver: String, n: usize },

    #[error("no records for solver {0}")]
    MissingSolver(String),

    #[error("malformed QUBO: {0}")]
    MalformedQubo(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
