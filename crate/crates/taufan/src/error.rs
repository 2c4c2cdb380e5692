use thiserror::Error;

pub type Result<T> = std::result::Result<T, TaufanError>;

#[derive(Error, Debug, Clone)]
pub enum TaufanError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("relation is not admissible: {0}")]
    NotAdmissible(String),

    #[error("unbounded path algebra: paths of length {bound} do not vanish modulo the relations (nilbound {bound})")]
    Unbounded { bound: usize },

    #[error("budget exceeded in {what}: {detail}")]
    BudgetExceeded { what: String, detail: String },

    #[error("operation `{0}` requires a prime field; re-run the enumeration over F_p")]
    RationalsUnsupported(String),

    #[error("inconclusive result in {what}: {detail}")]
    Inconclusive { what: String, detail: String },

    #[error("internal inconsistency in {what}: {detail}")]
    Inconsistency { what: String, detail: String },

    #[error("module is not tau-rigid: {0}")]
    NotTauRigid(String),

    #[error("pair is not tau-tilting: {0}")]
    NotTauTilting(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl TaufanError {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> TaufanError {
        TaufanError::Parse { line, col, msg: msg.into() }
    }
    pub fn budget(what: impl Into<String>, detail: impl Into<String>) -> TaufanError {
        TaufanError::BudgetExceeded { what: what.into(), detail: detail.into() }
    }
    pub fn inconsistency(what: impl Into<String>, detail: impl Into<String>) -> TaufanError {
        TaufanError::Inconsistency { what: what.into(), detail: detail.into() }
    }
    pub fn inconclusive(what: impl Into<String>, detail: impl Into<String>) -> TaufanError {
        TaufanError::Inconclusive { what: what.into(), detail: detail.into() }
    }
}
