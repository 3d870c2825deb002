//! Dense square matrices over the tower `K`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::AlgebraError;
use crate::field::poly::forward_owned;
use crate::field::TowerElement;

pub type Vector = Vec<TowerElement>;

/// A `d x d` matrix, row-major. Serialized as a list of rows of
/// expression strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<TowerElement>>", into = "Vec<Vec<TowerElement>>")]
pub struct SqMatrix {
    dim: usize,
    entries: Vec<TowerElement>,
}

impl SqMatrix {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        SqMatrix { dim, entries: vec![TowerElement::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        SqMatrix::scalar(dim, TowerElement::one())
    }

    pub fn scalar(dim: usize, c: TowerElement) -> Self {
        SqMatrix::diag((0..dim).map(|_| c.clone()).collect())
    }

    pub fn diag(d: Vec<TowerElement>) -> Self {
        let mut m = SqMatrix::zero(d.len());
        for (k, c) in d.into_iter().enumerate() {
            m.set(k, k, c);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<TowerElement>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(AlgebraError::EmptyMatrix);
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(AlgebraError::DimensionMismatch { expected: dim, found: r.len() });
        }
        Ok(SqMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Integer matrix; handy for the auxiliary tables.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, AlgebraError> {
        SqMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&n| TowerElement::from_int(n)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &TowerElement {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: TowerElement) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<TowerElement>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.dim).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[TowerElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn diagonal(&self) -> Vector {
        (0..self.dim).map(|k| self.get(k, k).clone()).collect()
    }

    pub fn transpose(&self) -> SqMatrix {
        let mut t = SqMatrix::zero(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn trace(&self) -> TowerElement {
        (0..self.dim).fold(TowerElement::zero(), |acc, k| &acc + self.get(k, k))
    }

    pub fn scale(&self, c: &TowerElement) -> SqMatrix {
        SqMatrix { dim: self.dim, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn kron(&self, other: &SqMatrix) -> SqMatrix {
        let n = other.dim;
        let mut out = SqMatrix::zero(self.dim * n);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                for rr in 0..n {
                    for cc in 0..n {
                        let b = other.get(rr, cc);
                        if !b.is_zero() {
                            out.set(r * n + rr, c * n + cc, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn checked_mul(&self, rhs: &SqMatrix) -> Result<SqMatrix, AlgebraError> {
        self.check_dim(rhs.dim)?;
        Ok(self * rhs)
    }

    pub fn mul_vec(&self, v: &[TowerElement]) -> Result<Vector, AlgebraError> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|r| {
                (0..self.dim).fold(TowerElement::zero(), |acc, c| {
                    let a = self.get(r, c);
                    if a.is_zero() || v[c].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[c])
                    }
                })
            })
            .collect())
    }

    pub fn check_dim(&self, d: usize) -> Result<(), AlgebraError> {
        if d == self.dim {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch { expected: self.dim, found: d })
        }
    }

    /// Inverse by Gauss-Jordan elimination with exact pivots.
    pub fn inverse(&self) -> Result<SqMatrix, AlgebraError> {
        if self.is_diagonal() {
            let d = self.diagonal().iter().map(|e| e.inv()).collect::<Result<Vec<_>, _>>().map_err(|_| AlgebraError::Singular)?;
            return Ok(SqMatrix::diag(d));
        }
        let n = self.dim;
        let mut a = self.rows();
        let mut inv = SqMatrix::identity(n).rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(AlgebraError::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].inv().map_err(|_| AlgebraError::Singular)?;
            for k in 0..n {
                a[col][k] = &a[col][k] * &p;
                inv[col][k] = &inv[col][k] * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for k in 0..n {
                    if !a[col][k].is_zero() {
                        a[r][k] = &a[r][k] - &(&f * &a[col][k]);
                    }
                    if !inv[col][k].is_zero() {
                        inv[r][k] = &inv[r][k] - &(&f * &inv[col][k]);
                    }
                }
            }
        }
        SqMatrix::from_rows(inv)
    }

    /// Coefficients `c_0, ..., c_d` of `det(X I - M)`, lowest degree first,
    /// by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<TowerElement> {
        let n = self.dim;
        let mut coeffs = vec![TowerElement::zero(); n + 1];
        coeffs[n] = TowerElement::one();
        let mut m = SqMatrix::zero(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for d in 0..n {
                let e = &next.entries[d * n + d] + &coeffs[n - k + 1];
                next.set(d, d, e);
            }
            m = next;
            let t = (self * &m).trace();
            coeffs[n - k] = -t.div(&TowerElement::from_int(k as i64)).expect("k > 0");
        }
        coeffs
    }

    pub fn pow(&self, e: u32) -> SqMatrix {
        (0..e).fold(SqMatrix::identity(self.dim), |acc, _| &acc * self)
    }
}

impl TryFrom<Vec<Vec<TowerElement>>> for SqMatrix {
    type Error = AlgebraError;
    fn try_from(rows: Vec<Vec<TowerElement>>) -> Result<Self, AlgebraError> {
        SqMatrix::from_rows(rows)
    }
}

impl From<SqMatrix> for Vec<Vec<TowerElement>> {
    fn from(m: SqMatrix) -> Self {
        m.rows()
    }
}

impl<'a> Mul<&'a SqMatrix> for &'a SqMatrix {
    type Output = SqMatrix;
    fn mul(self, rhs: &SqMatrix) -> SqMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = SqMatrix::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let e = &out.entries[r * n + c] + &(a * b);
                        out.entries[r * n + c] = e;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a SqMatrix> for &'a SqMatrix {
    type Output = SqMatrix;
    fn add(self, rhs: &SqMatrix) -> SqMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        SqMatrix { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a SqMatrix> for &'a SqMatrix {
    type Output = SqMatrix;
    fn sub(self, rhs: &SqMatrix) -> SqMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        SqMatrix { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &SqMatrix {
    type Output = SqMatrix;
    fn neg(self) -> SqMatrix {
        SqMatrix { dim: self.dim, entries: self.entries.iter().map(|e| -e).collect() }
    }
}

impl Neg for SqMatrix {
    type Output = SqMatrix;
    fn neg(self) -> SqMatrix {
        -&self
    }
}

forward_owned!(SqMatrix, Add add, Sub sub, Mul mul);

impl fmt::Display for SqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.entries.chunks(self.dim).enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `u . v` without conjugation.
pub fn dot(u: &[TowerElement], v: &[TowerElement]) -> TowerElement {
    u.iter().zip(v).fold(TowerElement::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { &acc + &(a * b) })
}

/// Standard basis vector `e_k` (0-based) of length `n`.
pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = vec![TowerElement::zero(); n];
    v[k] = TowerElement::one();
    v
}
