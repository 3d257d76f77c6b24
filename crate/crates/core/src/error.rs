use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("code {code} is outside [0, {max}]")]
    CodeOutOfRange { code: i64, max: usize },

    #[error("transition levels are not strictly increasing at index {index}")]
    NonMonotoneTransitions { index: usize },

    #[error("INL perturbation kept violating monotonicity after {attempts} draws")]
    InlRetriesExhausted { attempts: usize },

    #[error("expected {expected} transition levels, found {found}")]
    TransitionCountMismatch { expected: usize, found: usize },

    #[error("malformed row {line} in {path}: {reason}")]
    MalformedRow {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("design matrix is rank deficient (model unidentifiable)")]
    RankDeficient,

    #[error("covariance matrix is not factorizable even with ridge {ridge:e}")]
    NotFactorizable { ridge: f64 },

    #[error("non-physical noise estimate: gamma_1 = {0} must be positive")]
    NonPhysicalSigma(f64),

    #[error("record length {len} is not samples_per_period * periods = {expected}")]
    IncoherentRecord { len: usize, expected: usize },

    #[error("degenerate comparator record: estimated probability is {0}")]
    DegenerateRecord(f64),

    #[error("zero Fisher information: no transition within reach of the input")]
    ZeroInformation,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
