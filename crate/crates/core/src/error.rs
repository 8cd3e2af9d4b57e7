use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    BadPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("lift not found: {0}")]
    LiftNotFound(String),
    #[error("uncertified node: {0}")]
    Uncertified(String),
    #[error("division impossible: {0}")]
    Division(String),
    #[error("parity or congruence violation: {0}")]
    Congruence(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("not globally generated: {0}")]
    NotGenerated(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("insufficient table: {0}")]
    Table(String),
    #[error("grade mismatch: {0}")]
    Grade(String),
    #[error("not stable")]
    NotStable,
}

pub type Result<T> = std::result::Result<T, Error>;
