use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite value at index {index}: {value}")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("too few observations: need at least {needed}, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("both sample variances are zero; weight is undefined (0/0)")]
    BothVariancesZero,

    #[error("population variance must be positive, got {0}")]
    NonPositiveVariance(f64),

    #[error("design must be balanced (n1 = n2), got n1 = {n1}, n2 = {n2}")]
    UnbalancedDesign { n1: usize, n2: usize },

    #[error("zero denominator in weight computation")]
    ZeroDenominator,

    #[error("invalid d = {d} for delete-d jackknife with N = {n}")]
    InvalidD { d: usize, n: usize },

    #[error("unknown simulation model id {0} (expected 1..=5)")]
    InvalidModel(u8),

    #[error("model sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("unknown dataset '{0}'")]
    UnknownDataset(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sample {0} is empty after parsing")]
    MissingSample(u8),

    #[error("quantile argument {0} outside (0, 1)")]
    OutOfDomain(f64),

    #[error("statistic evaluation failed at leave-out index {index}: {source}")]
    StatisticEvaluation {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("bootstrap replicate {replicate} still degenerate after {retries} retries")]
    BootstrapRetriesExhausted { replicate: usize, retries: usize },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
