//! Anisotropy of diagonal pairing forms via square classes.
//!
//! Dividing by the first coefficient and absorbing squares (including `-1`,
//! a square in `k`) turns each coefficient into a squarefree monomial in the
//! transcendence basis `{sqrt(x_l), y_l}` of `K`. Distinct classes give an
//! anisotropic form by the monomial split argument.

use serde::{Deserialize, Serialize};

use super::pairing::DiagonalQuadraticForm;
use crate::field::TowerElement;
use crate::pfister::classes::ClassError;
use crate::pfister::{
    monomial_form_anisotropy, square_class, verify_monomial_certificate, MonomialCertificate, MonomialDiagonalForm, PfisterError,
    SquareClass, VerifyError,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnisotropyCertificate {
    pub coefficients: Vec<TowerElement>,
    /// Class of `c_k / c_0` for each `k`.
    pub classes: Vec<SquareClass>,
    pub monomial: MonomialCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum AnisotropyFailure {
    #[error("form has no coefficients")]
    Empty,
    #[error("coefficient {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("coefficient {index}: {reason}")]
    Unclassified { index: usize, reason: String },
    #[error("coefficients {first} and {second} share the square class {class}; anisotropy not decided")]
    DuplicateClass { first: usize, second: usize, class: String },
}

pub fn certify_anisotropic(form: &DiagonalQuadraticForm) -> Result<AnisotropyCertificate, AnisotropyFailure> {
    certify_coefficients(&form.coefficients)
}

pub fn certify_coefficients(coefficients: &[TowerElement]) -> Result<AnisotropyCertificate, AnisotropyFailure> {
    let first = coefficients.first().ok_or(AnisotropyFailure::Empty)?;
    if let Some(index) = coefficients.iter().position(|c| c.is_zero()) {
        return Err(AnisotropyFailure::ZeroCoefficient { index });
    }
    let classes = coefficients
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let r = c.div(first).expect("nonzero");
            square_class(&r, true).map_err(|e: ClassError| AnisotropyFailure::Unclassified { index, reason: e.to_string() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let form = MonomialDiagonalForm { coefficients: classes.iter().map(|c| c.class.clone()).collect() };
    let monomial = monomial_form_anisotropy(&form).map_err(|e| match e {
        PfisterError::DuplicateClass { first, second, class } => AnisotropyFailure::DuplicateClass { first, second, class },
        other => AnisotropyFailure::Unclassified { index: 0, reason: other.to_string() },
    })?;
    Ok(AnisotropyCertificate { coefficients: coefficients.to_vec(), classes, monomial })
}

/// Re-checks each square-class equation `c_k / c_0 = w^2 m^2 class` and
/// replays the monomial split tree. Step `k` is coefficient `k`; tree steps
/// follow after the coefficients.
pub fn verify_anisotropy(cert: &AnisotropyCertificate) -> Result<(), VerifyError> {
    let n = cert.coefficients.len();
    if n == 0 || cert.classes.len() != n {
        return Err(VerifyError::at(0, "coefficient and class counts differ"));
    }
    let first = &cert.coefficients[0];
    if first.is_zero() {
        return Err(VerifyError::at(0, "leading coefficient is zero"));
    }
    for (k, (c, cls)) in cert.coefficients.iter().zip(&cert.classes).enumerate() {
        let r = c.div(first).map_err(|e| VerifyError::at(k, e.to_string()))?;
        if !cls.reproduces(&r, true) {
            return Err(VerifyError::at(k, "square-class equation fails"));
        }
    }
    let form = MonomialDiagonalForm { coefficients: cert.classes.iter().map(|c| c.class.clone()).collect() };
    verify_monomial_certificate(&form, &cert.monomial).map_err(|e| VerifyError::at(n + e.step, e.reason))
}
