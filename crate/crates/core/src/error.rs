use alloc::boxed::Box;
use alloc::string::String;

use crate::measures::MeasureKind;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("degenerate rectangle")]
    DegenerateRectangle,
    #[error("k = {k} out of range for a sample of {n} points")]
    KOutOfRange { k: usize, n: usize },
    #[error("alpha = {0} must lie strictly inside (0, 1)")]
    InvalidAlpha(f64),
    #[error("quantile at boundary (p = {0})")]
    QuantileAtBoundary(f64),
    #[error("degenerate sample")]
    DegenerateSample,
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("copula density at boundary")]
    CopulaBoundary,
    #[error("kendall tau {tau} is not attainable for the {family} family")]
    UnattainableTau { family: &'static str, tau: f64 },
    #[error("{family} fit did not converge: {detail}")]
    FitFailed { family: &'static str, detail: String },
    #[error("every candidate copula fit failed")]
    AllFitsFailed,
    #[error("inverted interval")]
    InvertedInterval,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("measure {0:?} has no epsilon hyperparameter")]
    NotEpsBased(MeasureKind),
    #[error("measure {kind:?}: {source}")]
    Measure { kind: MeasureKind, source: Box<Error> },
    #[error("empty confusion table")]
    EmptyCounts,
    #[error("need at least two rows to aggregate, got {0}")]
    TooFewRows(usize),
    #[error("n must be positive")]
    ZeroCount,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
