use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hdr_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: column {name:?} not found; available: {available}")]
    UnknownColumn { path: PathBuf, name: String, available: String },
    #[error("{path}: row {row}, column {column:?}: {value:?} is not a number")]
    NonNumeric { path: PathBuf, row: usize, column: String, value: String },
    #[error("{0}")]
    Data(String),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, BenchError>;

pub(crate) fn usage(msg: impl Into<String>) -> BenchError {
    BenchError::Usage(msg.into())
}
