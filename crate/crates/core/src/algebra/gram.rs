//! Bilinear forms given by Gram matrices and their adjoint involutions.

use serde::{Deserialize, Serialize};

use super::matrix::{dot, SqMatrix};
use super::AlgebraError;
use crate::field::TowerElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GramKind {
    Symmetric,
    Skew,
}

impl GramKind {
    /// Kind of a Kronecker product: skew factors multiply like signs.
    pub fn tensor(self, other: GramKind) -> GramKind {
        if self == other {
            GramKind::Symmetric
        } else {
            GramKind::Skew
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvolutionKind {
    Orthogonal,
    Symplectic,
}

/// An invertible symmetric or skew matrix `G`, with `G^{-1}` cached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SqMatrix", into = "SqMatrix")]
pub struct GramMatrix {
    matrix: SqMatrix,
    inverse: SqMatrix,
    kind: GramKind,
}

impl GramMatrix {
    /// Detects the kind and caches the inverse.
    pub fn new(matrix: SqMatrix) -> Result<Self, AlgebraError> {
        let t = matrix.transpose();
        let kind = if t == matrix {
            GramKind::Symmetric
        } else if t == -&matrix {
            GramKind::Skew
        } else {
            return Err(AlgebraError::NotSymmetricOrSkew);
        };
        let inverse = matrix.inverse()?;
        Ok(GramMatrix { matrix, inverse, kind })
    }

    pub fn identity(dim: usize) -> Self {
        GramMatrix { matrix: SqMatrix::identity(dim), inverse: SqMatrix::identity(dim), kind: GramKind::Symmetric }
    }

    pub fn matrix(&self) -> &SqMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &SqMatrix {
        &self.inverse
    }

    pub fn kind(&self) -> GramKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn kron(&self, other: &GramMatrix) -> GramMatrix {
        GramMatrix {
            matrix: self.matrix.kron(&other.matrix),
            inverse: self.inverse.kron(&other.inverse),
            kind: self.kind.tensor(other.kind),
        }
    }

    /// `u^T G v`.
    pub fn bilinear(&self, u: &[TowerElement], v: &[TowerElement]) -> Result<TowerElement, AlgebraError> {
        self.matrix.check_dim(u.len())?;
        Ok(dot(u, &self.matrix.mul_vec(v)?))
    }
}

impl TryFrom<SqMatrix> for GramMatrix {
    type Error = AlgebraError;
    fn try_from(m: SqMatrix) -> Result<Self, AlgebraError> {
        GramMatrix::new(m)
    }
}

impl From<GramMatrix> for SqMatrix {
    fn from(g: GramMatrix) -> SqMatrix {
        g.matrix
    }
}

/// The involution `m -> G^{-1} m^T G` adjoint to a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionSpec {
    pub gram: GramMatrix,
}

impl InvolutionSpec {
    pub fn new(gram: GramMatrix) -> Self {
        InvolutionSpec { gram }
    }

    pub fn apply(&self, m: &SqMatrix) -> Result<SqMatrix, AlgebraError> {
        self.gram.matrix.check_dim(m.dim())?;
        Ok(&(&self.gram.inverse * &m.transpose()) * &self.gram.matrix)
    }

    pub fn kind(&self) -> InvolutionKind {
        classify_involution(&self.gram)
    }
}

pub fn classify_involution(gram: &GramMatrix) -> InvolutionKind {
    match gram.kind {
        GramKind::Symmetric => InvolutionKind::Orthogonal,
        GramKind::Skew => InvolutionKind::Symplectic,
    }
}
