use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parse error in record {record}: {message}")]
    Record { record: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("set of series is empty")]
    EmptySet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "corridor radius {radius} is narrower than the length difference |{p} - {q}|; \
         no admissible alignment path exists"
    )]
    InfeasibleCorridor { radius: usize, p: usize, q: usize },

    #[error("numerical underflow: {0}; use the log-domain value instead")]
    Underflow(String),

    #[error("degenerate alignment distribution: {0}")]
    DegenerateDistribution(String),

    #[error("output index {index} received no alignment mass")]
    Coverage { index: usize },

    #[error("evaluation budget {budget} is smaller than one sweep ({sweep} evaluations)")]
    Budget { budget: usize, sweep: usize },

    #[error("leave-one-out is infeasible: class {label:?} has a single training member")]
    LooInfeasible { label: String },

    #[error("incomplete error matrix: {0}")]
    IncompleteMatrix(String),
}
