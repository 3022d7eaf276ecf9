use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("successes exceed trials ({successes}/{trials})")]
    SuccessesExceedTrials { successes: u64, trials: u64 },
    #[error("cohort has zero trials")]
    ZeroTrials,
    #[error("table needs at least {min} alternatives, found {found}")]
    TooFewAlternatives { min: usize, found: usize },
    #[error("table needs at least one group")]
    NoGroups,
    #[error("duplicate {axis} label `{label}`")]
    DuplicateLabel { axis: &'static str, label: String },
    #[error("row `{alternative}` has {found} cells, expected {expected}")]
    RaggedRow {
        alternative: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown alternative `{0}`")]
    UnknownAlternative(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("operation requires exactly 2 alternatives, table has {0}")]
    NotBinary(usize),
    #[error("operation requires at least {min} groups, table has {found}")]
    TooFewGroups { min: usize, found: usize },
    #[error("groups must be distinct, got `{0}` twice")]
    SameGroup(String),
    #[error("explicit enumeration is capped at {cap} groups, table has {found}")]
    EnumerationCap { cap: usize, found: usize },
    #[error("invalid adjustment policy: {0}")]
    InvalidPolicy(&'static str),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("pooled rates are tied; there is no preference to reverse")]
    PooledTie,
    #[error("infeasible split bounds: {0}")]
    InfeasibleSplit(String),
    #[error("split search exceeded the cap of {cap} candidates")]
    SearchCapExceeded { cap: u64 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid JSON table: {0}")]
    Json(String),
}
