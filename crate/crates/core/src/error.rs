use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An unregularized zeta value whose series diverges was requested.
    #[error("divergent value: {0}")]
    DivergentValue(String),
    #[error("value is not weight-homogeneous (weights {0} and {1})")]
    NotHomogeneous(u32, u32),
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: u32, found: u32 },
    #[error("value contains T-monomials and cannot lie in a relation span")]
    NotTFree,
    #[error("parameters outside the domain of {kind}: {detail}")]
    DomainError { kind: String, detail: String },
    #[error("fit schedule has {0} sample points, need at least 3")]
    ScheduleTooShort(usize),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
