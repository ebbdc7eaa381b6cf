use std::path::PathBuf;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid size n={0}: labels must number between 1 and {max}", max = crate::state::MAX_LABELS)]
    InvalidSize(usize),

    #[error("label {label} out of range for n={n}")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("cannot add edge ({u},{v}): {reason}")]
    IllegalEdge { u: usize, v: usize, reason: &'static str },

    #[error("multiplicity overflow at level {level}")]
    Overflow { level: usize },

    #[error("wrong level: expected {expected}, found {found}")]
    WrongLevel { expected: usize, found: usize },

    #[error("brute force refused for n={n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("class budget exceeded at level {level}: {classes} classes > {budget}")]
    BudgetExceeded { level: usize, classes: usize, budget: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed key: {0}")]
    MalformedKey(String),

    #[error("checkpoint {path}: bad magic")]
    BadMagic { path: PathBuf },

    #[error("checkpoint {path}: unsupported version {version}")]
    BadVersion { path: PathBuf, version: u16 },

    #[error("checkpoint {path}: truncated ({detail})")]
    Truncated { path: PathBuf, detail: String },

    #[error("checkpoint {path}: record {index} is invalid: {detail}")]
    BadRecord { path: PathBuf, index: u64, detail: String },

    #[error("checkpoint {path}: header mismatch: {detail}")]
    HeaderMismatch { path: PathBuf, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
