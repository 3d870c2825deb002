//! Split matrix models of the quaternion algebras `(x_l, y_l)` over `K` and
//! the Gram matrices of their standard involutions.

use super::gram::GramMatrix;
use super::matrix::SqMatrix;
use crate::field::{TowerElement, Var};

/// 2x2 images of the generators `i_l`, `j_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionGenerators {
    pub index: u16,
    pub mi: SqMatrix,
    pub mj: SqMatrix,
}

impl QuaternionGenerators {
    /// Image of `k_l = i_l j_l`.
    pub fn mk(&self) -> SqMatrix {
        &self.mi * &self.mj
    }
}

/// `i_l -> diag(sqrt(x_l), -sqrt(x_l))`, `j_l -> [[0, 1], [y_l, 0]]`.
pub fn quaternion_split(l: u16) -> QuaternionGenerators {
    let r = TowerElement::sqrt_x(l);
    let y = TowerElement::var(Var::Y(l));
    let mi = SqMatrix::diag(vec![r.clone(), -r]);
    let mj = SqMatrix::from_rows(vec![vec![TowerElement::zero(), TowerElement::one()], vec![y, TowerElement::zero()]])
        .expect("2x2");
    QuaternionGenerators { index: l, mi, mj }
}

fn gram(m: SqMatrix) -> GramMatrix {
    GramMatrix::new(m).expect("table entry is an invertible symmetric or skew matrix")
}

/// `Sigma = [[0, 1], [-1, 0]]`; `Int(Sigma) . t` is the canonical involution.
pub fn sigma() -> SqMatrix {
    SqMatrix::from_ints(&[&[0, 1], &[-1, 0]]).expect("2x2")
}

/// Adjoint Gram matrix of the canonical involution: `Sigma^{-1}`.
pub fn sigma_gram() -> GramMatrix {
    gram(SqMatrix::from_ints(&[&[0, -1], &[1, 0]]).expect("2x2"))
}

/// `T = diag(-sqrt(x_l), -y_l sqrt(x_l))`, fixing `i_l` and `j_l`.
pub fn tau(l: u16) -> SqMatrix {
    let r = TowerElement::sqrt_x(l);
    let y = TowerElement::var(Var::Y(l));
    SqMatrix::diag(vec![-r.clone(), -(&y * &r)])
}

/// `T^{-1} = diag(-1/sqrt(x_l), -1/(y_l sqrt(x_l)))`.
pub fn tau_gram(l: u16) -> GramMatrix {
    gram(tau(l).inverse().expect("T is invertible"))
}

/// `Delta = [[0, 1], [1, 0]] = Delta^{-1}`.
pub fn delta() -> SqMatrix {
    SqMatrix::from_ints(&[&[0, 1], &[1, 0]]).expect("2x2")
}

pub fn delta_gram() -> GramMatrix {
    gram(delta())
}

/// Kronecker product of a list of Gram matrices, left to right.
pub fn kron_grams(factors: &[GramMatrix]) -> GramMatrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold(first.clone(), |acc, g| acc.kron(g))
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all(factors: &[SqMatrix]) -> SqMatrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold(first.clone(), |acc, m| acc.kron(m))
}
