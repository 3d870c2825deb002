//! The quadratic form `v -> Q(v, Bv)` (symplectic) or `v -> Q(Bv, Bv)`
//! (orthogonal) on an eigenspace of `A`, computed on a generic vector
//! `v = sum_k l_k e_{I_k}` with fresh symbols `l_k`.

use serde::{Deserialize, Serialize};

use super::eigen::Eigenspace;
use super::StabilityError;
use crate::algebra::InvolutionKind;
use crate::construct::StableTupleCandidate;
use crate::field::{BaseScalar, Monomial, RatFunc, TowerElement, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingKind {
    /// `Q(v, Bv)`.
    VBv,
    /// `Q(Bv, Bv)`.
    BvBv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalQuadraticForm {
    pub pairing: PairingKind,
    pub eigenvalue: TowerElement,
    /// Kronecker-basis positions of the eigenvectors, one per coefficient.
    pub labels: Vec<usize>,
    pub coefficients: Vec<TowerElement>,
    /// The pairing on the generic vector, as computed.
    pub generic_value: TowerElement,
}

pub fn pairing_kind(t: &StableTupleCandidate) -> PairingKind {
    match t.kind {
        InvolutionKind::Symplectic => PairingKind::VBv,
        InvolutionKind::Orthogonal => PairingKind::BvBv,
    }
}

/// Generic eigenvector `sum_k l_{k+1} e_{I_k}`.
pub fn generic_vector(dim: usize, space: &Eigenspace) -> Vec<TowerElement> {
    let mut v = vec![TowerElement::zero(); dim];
    for (k, e) in space.vectors.iter().enumerate() {
        v[e.index] = TowerElement::var(Var::L(k as u16 + 1));
    }
    v
}

pub fn pairing_quadratic_form(t: &StableTupleCandidate, space: &Eigenspace) -> Result<DiagonalQuadraticForm, StabilityError> {
    let pairing = pairing_kind(t);
    let v = generic_vector(t.dim(), space);
    let bv = t.b().mul_vec(&v)?;
    let value = match pairing {
        PairingKind::VBv => t.gram.bilinear(&v, &bv)?,
        PairingKind::BvBv => t.gram.bilinear(&bv, &bv)?,
    };
    let coefficients = diagonal_coefficients(&value, space.dim())?;
    Ok(DiagonalQuadraticForm {
        pairing,
        eigenvalue: space.eigenvalue.clone(),
        labels: space.vectors.iter().map(|e| e.index).collect(),
        coefficients,
        generic_value: value,
    })
}

/// Splits `sum_k c_k l_k^2` into the `c_k`; any other dependence on the
/// symbols is reported as cross terms.
pub fn diagonal_coefficients(value: &TowerElement, n: usize) -> Result<Vec<TowerElement>, StabilityError> {
    let mut out = vec![TowerElement::zero(); n];
    for (slot, c) in value.slots() {
        if c.den().vars().iter().any(|v| matches!(v, Var::L(_))) {
            return Err(StabilityError::CrossTermsPresent);
        }
        let den = RatFunc::from_poly(c.den().clone()).inv().expect("denominator is nonzero");
        for (m, coeff) in c.num().terms() {
            let ls: Vec<(Var, u32)> = m.powers().iter().copied().filter(|(v, _)| matches!(v, Var::L(_))).collect();
            let k = match ls.as_slice() {
                [(Var::L(k), 2)] if (*k as usize) <= n => *k as usize - 1,
                _ => return Err(StabilityError::CrossTermsPresent),
            };
            let rest = Monomial::from_pairs(m.powers().iter().copied().filter(|(v, _)| !matches!(v, Var::L(_))));
            let term = &RatFunc::monomial(rest).scale(coeff) * &den;
            out[k] = &out[k] + &TowerElement::with_slot(slot, term);
        }
    }
    Ok(out)
}

/// The constant `c` with `a = c * b`, if one exists (both nonzero).
pub fn proportionality(a: &TowerElement, b: &TowerElement) -> Option<BaseScalar> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    a.div(b).ok()?.as_constant()
}
