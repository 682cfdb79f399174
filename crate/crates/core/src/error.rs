use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is outside the unit interval")]
    OutOfRange(String),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("atom `{0}` is not in the signature")]
    UnknownAtom(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown connective family `{0}`")]
    UnknownFamily(String),
    #[error("unknown aggregator `{0}`")]
    UnknownAggregator(String),
    #[error("connective family `{family}` rejected: {reason}")]
    FamilyRejected { family: String, reason: String },
    #[error("family `{0}` is only available in approximate mode")]
    RequiresApproximateMode(String),
    #[error("operator is not monotone: iterate {step} decreased")]
    NonMonotone { step: usize },
    #[error("iteration budget of {0} steps exhausted")]
    BudgetExhausted(usize),
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SizeCapExceeded { size: u128, cap: u128 },
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("ultimate approximator: {0}")]
    UnsupportedUltimate(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
