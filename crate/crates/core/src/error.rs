use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} is outside the ground set [1..={m}]")]
    VertexOutOfRange { vertex: usize, m: usize },

    #[error("ground set of size {m} exceeds the limit of {limit} vertices")]
    TooManyVertices { m: usize, limit: usize },

    #[error("the void complex (no faces at all) is not accepted as input")]
    VoidComplex,

    #[error("ground-set mismatch: expected m = {expected}, got {got}")]
    GroundSetMismatch { expected: usize, got: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid weighted hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("total mass is zero")]
    ZeroTotal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("complex is not self-dual")]
    NotSelfDual,

    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
