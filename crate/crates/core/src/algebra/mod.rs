//! Matrices over `K`, Gram-matrix involutions and quaternion splittings.

pub mod gram;
pub mod matrix;
pub mod quaternion;

pub use gram::{classify_involution, GramKind, GramMatrix, InvolutionKind, InvolutionSpec};
pub use matrix::{dot, unit_vector, SqMatrix, Vector};
pub use quaternion::{quaternion_split, QuaternionGenerators};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("matrix is singular")]
    Singular,
    #[error("Gram matrix is neither symmetric nor skew")]
    NotSymmetricOrSkew,
}
