use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("radicand mismatch: sqrt({left}) and sqrt({right}) do not share a field")]
    FieldMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    /// A value sits exactly on the endpoint of an open interval that an
    /// analysis result is stated on.
    #[error("boundary case: {what} equals {at}")]
    Boundary { what: String, at: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible partition: {0}")]
    InfeasiblePartition(String),

    #[error("policy/state mismatch: {0}")]
    PolicyStateMismatch(String),

    #[error("policy horizon of {horizon} steps is exhausted")]
    HorizonExhausted { horizon: usize },

    #[error("branch enumeration exceeds the cap of {cap} leaves")]
    BranchCapExceeded { cap: usize },

    #[error("index range outside identity validity: {0}")]
    InvalidRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("function evaluation failed at x = {point}: {reason}")]
    Evaluation { point: String, reason: String },

    #[error("submitted values do not match pending points: {0}")]
    ValueMismatch(String),

    #[error("values are not consistent with a unimodal function: {0}")]
    NotUnimodal(String),

    #[error("search is finished")]
    Finished,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn boundary(what: impl Into<String>, at: impl ToString) -> Self {
        Error::Boundary {
            what: what.into(),
            at: at.to_string(),
        }
    }
}
