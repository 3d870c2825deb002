//! Eigenvectors of `lambda_1 = A`, which is diagonal on the Kronecker basis.

use serde::{Deserialize, Serialize};

use super::StabilityError;
use crate::construct::StableTupleCandidate;
use crate::field::TowerElement;

/// A basis vector `e_{i_1, ..., i_q} (x) f_m` of an eigenspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenVector {
    /// 0-based position in the Kronecker basis.
    pub index: usize,
    /// `(i_1, ..., i_q)`, 1-based; empty without a Kronecker layout.
    pub quaternion_indices: Vec<u8>,
    /// 1-based index of the matrix-factor basis vector.
    pub m: usize,
    /// `b_k = 1` when `j_k e_{i_k} = y_k e_{i_k'}` (i.e. `i_k = 1`), else 0.
    pub parities: Vec<u8>,
    /// Position of `e_{i_1', ..., i_q'} (x) f_m`, every quaternion index flipped.
    pub flipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenspace {
    pub eigenvalue: TowerElement,
    pub vectors: Vec<EigenVector>,
}

impl Eigenspace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub dim: usize,
    pub spaces: Vec<Eigenspace>,
}

impl EigenSystem {
    pub fn find(&self, eigenvalue: &TowerElement) -> Option<&Eigenspace> {
        self.spaces.iter().find(|s| &s.eigenvalue == eigenvalue)
    }
}

/// Groups the diagonal of `A` into eigenspaces in order of first appearance.
pub fn eigen_system(t: &StableTupleCandidate) -> Result<EigenSystem, StabilityError> {
    let a = t.a();
    if !a.is_diagonal() {
        return Err(StabilityError::NotDiagonalizable);
    }
    let mut spaces: Vec<Eigenspace> = Vec::new();
    for (index, ev) in a.diagonal().into_iter().enumerate() {
        let vector = match t.layout {
            Some(layout) => {
                let (bits, m) = layout.decode(index);
                let flipped_bits: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
                EigenVector {
                    index,
                    quaternion_indices: bits.iter().map(|b| b + 1).collect(),
                    m: m + 1,
                    parities: bits.iter().map(|b| 1 - b).collect(),
                    flipped: layout.encode(&flipped_bits, m),
                }
            }
            None => EigenVector { index, quaternion_indices: vec![], m: index + 1, parities: vec![], flipped: index },
        };
        match spaces.iter_mut().find(|s| s.eigenvalue == ev) {
            Some(s) => s.vectors.push(vector),
            None => spaces.push(Eigenspace { eigenvalue: ev, vectors: vec![vector] }),
        }
    }
    Ok(EigenSystem { dim: a.dim(), spaces })
}
