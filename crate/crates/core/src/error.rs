use thiserror::Error;

/// Errors produced by region evaluation and comparison.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid channel parameters: {0}")]
    InvalidChannel(String),

    #[error("parameter {name} = {value} outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("empty region has no support")]
    EmptyRegion,

    #[error("every generated pentagon was empty ({count} evaluated)")]
    AllEmpty { count: usize },

    #[error("{count} pentagons had non-finite bounds (overflow?)")]
    NonFinite { count: usize },

    #[error("no feasible covariance split")]
    NoFeasibleCovSplit,

    #[error("direction sets differ")]
    DirectionMismatch,

    #[error("region does not contain origin")]
    OriginNotMember,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("probability table does not sum to 1 (sum = {0})")]
    NotNormalized(f64),

    #[error("invalid probability table: {0}")]
    InvalidTable(String),

    #[error("invalid kernel {name}: {reason}")]
    InvalidKernel { name: &'static str, reason: String },

    #[error("distribution variant mismatch: expected {expected}, got {got}")]
    VariantMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("joint table of {entries} entries exceeds the limit of {limit}")]
    TableTooLarge { entries: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
