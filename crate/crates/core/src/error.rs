use thiserror::Error;

/// Errors raised by group computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("element is not a member of the group: {0}")]
    NotAMember(String),

    #[error("modulus {n} is not a multiple of m0 = {m0}")]
    BadModulus { n: u64, m0: u64 },

    #[error("{n} is not coprime to {r}")]
    NotCoprime { n: i64, r: i64 },

    #[error("group order {order} exceeds the solver cap {cap}")]
    CapExceeded { order: usize, cap: usize },

    #[error("irrep solver did not converge after {0} reseeds")]
    ConvergenceFailure(usize),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("cocycle value is not a lattice vector: {0}")]
    IntegralityViolation(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
