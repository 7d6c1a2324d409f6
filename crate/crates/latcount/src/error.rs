use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group ring modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("truncation degree mismatch: {0} vs {1}")]
    DegreeMismatch(u64, u64),
    #[error("matrix entry at row {row}, column {col} is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,
    #[error("demand vector has length {got}, expected {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("column {col} of the matrix is zero, so the polytope is unbounded")]
    UnboundedPolytope { col: usize },
    #[error("vertex set is not stable: column {col} meets vertices {a} and {b}")]
    NotStable { col: usize, a: usize, b: usize },
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("resource limit exceeded: needed {needed}, cap {cap}")]
    ResourceLimit { needed: u128, cap: u128 },
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
