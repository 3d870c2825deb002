//! Totally isotropic and invariant subspaces over `K`.

use super::StabilityError;
use crate::algebra::{GramMatrix, SqMatrix, Vector};
use crate::field::TowerElement;

/// Row-reduced basis of a subspace of `K^n`, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct KSubspace {
    rows: Vec<(usize, Vector)>,
}

impl KSubspace {
    pub fn new() -> Self {
        KSubspace { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[TowerElement]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a = &*a - &(&f * b);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[TowerElement]) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[TowerElement]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        let r: Vector = r.iter().map(|e| e * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&r) {
                    if !b.is_zero() {
                        *a = &*a - &(&f * b);
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

pub fn rank(vectors: &[Vector]) -> usize {
    let mut s = KSubspace::new();
    vectors.iter().filter(|v| s.insert(v)).count()
}

/// Whether `b(u, w) = 0` for all basis pairs. The basis must be independent.
pub fn is_isotropic_subspace(gram: &GramMatrix, basis: &[Vector]) -> Result<bool, StabilityError> {
    for v in basis {
        gram.matrix().check_dim(v.len())?;
    }
    if rank(basis) != basis.len() {
        return Err(StabilityError::DependentBasis);
    }
    for u in basis {
        for w in basis {
            if !gram.bilinear(u, w)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest subspace containing `seed` and stable under every generator.
pub fn spin(seed: &[TowerElement], gens: &[SqMatrix]) -> Result<KSubspace, StabilityError> {
    let mut space = KSubspace::new();
    let mut queue = vec![seed.to_vec()];
    while let Some(v) = queue.pop() {
        if !space.insert(&v) {
            continue;
        }
        for g in gens {
            queue.push(g.mul_vec(&v)?);
        }
    }
    Ok(space)
}

/// Whether `span(basis)` is stable under every generator.
pub fn is_invariant(basis: &[Vector], gens: &[SqMatrix]) -> Result<bool, StabilityError> {
    let mut space = KSubspace::new();
    for v in basis {
        space.insert(v);
    }
    for g in gens {
        for v in basis {
            if !space.contains(&g.mul_vec(v)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
