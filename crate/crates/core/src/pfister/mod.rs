//! Pfister forms over `k(t_1, ..., t_n)` and anisotropy certificates.
//!
//! Subsets `I` of `{1, ..., n}` are bitmasks with bit `k - 1` for `t_k`, so a
//! candidate vector is indexed `f[I]` for `I` in `0..2^n`.

pub mod classes;
pub mod descent;
pub mod monomial_form;

use serde::{Deserialize, Serialize};

use crate::field::{parse_poly, Monomial, MultiPoly, ParseError, Var};

pub use classes::{class_element, quaternion_norm_check, square_class, NormFormReport, SquareClass};
pub use descent::{descent_certificate, verify_descent, DescentCertificate, DescentStep};
pub use monomial_form::{monomial_form_anisotropy, verify_monomial_certificate, MonomialCertificate, MonomialDiagonalForm, SplitNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfisterError {
    #[error("candidate has {found} entries, the {n}-fold form needs {expected}")]
    ArityMismatch { n: usize, expected: usize, found: usize },
    #[error("candidate entry {index} involves {var}, outside t1..t{n}")]
    ForeignVariable { index: usize, var: String, n: usize },
    #[error("candidate is the zero vector")]
    ZeroCandidate,
    #[error("coefficients {first} and {second} share the square class {class}")]
    DuplicateClass { first: usize, second: usize, class: String },
    #[error("coefficient {index} is not a squarefree monomial")]
    NotSquarefree { index: usize },
    #[error("arity {0} is above the supported maximum of 16")]
    TooLarge(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Where a replayed certificate disagrees with its recomputation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {step}: {reason}")]
pub struct VerifyError {
    pub step: usize,
    pub reason: String,
}

impl VerifyError {
    pub fn at(step: usize, reason: impl Into<String>) -> Self {
        VerifyError { step, reason: reason.into() }
    }
}

/// `<<t_1, ..., t_n>>`: the diagonal form with coefficients `t_I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfisterForm {
    n: usize,
}

impl PfisterForm {
    pub fn new(n: usize) -> Result<Self, PfisterError> {
        if n > 16 {
            return Err(PfisterError::TooLarge(n));
        }
        Ok(PfisterForm { n })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t_I = prod_{k in I} t_k`.
    pub fn coefficient(&self, subset: usize) -> Monomial {
        Monomial::from_pairs((0..self.n).filter(|k| subset >> k & 1 == 1).map(|k| (Var::T(k as u16 + 1), 1)))
    }

    pub fn coefficients(&self) -> Vec<Monomial> {
        (0..self.len()).map(|i| self.coefficient(i)).collect()
    }
}

/// A vector `(f_I)` of polynomials in `t_1, ..., t_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyCandidate {
    pub f: Vec<MultiPoly>,
}

impl IsotropyCandidate {
    pub fn new(f: Vec<MultiPoly>) -> Self {
        IsotropyCandidate { f }
    }

    /// One expression per entry, in subset order.
    pub fn parse<S: AsRef<str>>(entries: &[S]) -> Result<Self, PfisterError> {
        Ok(IsotropyCandidate { f: entries.iter().map(|s| parse_poly(s.as_ref())).collect::<Result<_, _>>()? })
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().all(|p| p.is_zero())
    }

    pub fn check(&self, form: &PfisterForm) -> Result<(), PfisterError> {
        if self.f.len() != form.len() {
            return Err(PfisterError::ArityMismatch { n: form.n, expected: form.len(), found: self.f.len() });
        }
        for (index, p) in self.f.iter().enumerate() {
            if let Some(v) = p.vars().into_iter().find(|v| !matches!(v, Var::T(k) if (*k as usize) <= form.n)) {
                return Err(PfisterError::ForeignVariable { index, var: v.to_string(), n: form.n });
            }
        }
        Ok(())
    }
}

/// `sum_I t_I f_I^2`.
pub fn evaluate(form: &PfisterForm, cand: &IsotropyCandidate) -> Result<MultiPoly, PfisterError> {
    cand.check(form)?;
    Ok(cand
        .f
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .fold(MultiPoly::zero(), |acc, (i, f)| &acc + &(f * f).mul_monomial(&form.coefficient(i))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: u16) -> MultiPoly {
        MultiPoly::var(Var::T(k))
    }

    #[test]
    fn evaluate_examples() {
        let f1 = PfisterForm::new(1).unwrap();
        let e = evaluate(&f1, &IsotropyCandidate::new(vec![MultiPoly::one(), MultiPoly::zero()])).unwrap();
        assert!(e.is_one());
        let e = evaluate(&f1, &IsotropyCandidate::new(vec![MultiPoly::zero(), MultiPoly::one()])).unwrap();
        assert_eq!(e, t(1));
        let f2 = PfisterForm::new(2).unwrap();
        let cand = IsotropyCandidate::new(vec![t(2), MultiPoly::zero(), MultiPoly::one(), MultiPoly::zero()]);
        assert_eq!(evaluate(&f2, &cand).unwrap(), &(&t(2) * &t(2)) + &t(2));
    }

    #[test]
    fn shape_errors() {
        let f1 = PfisterForm::new(1).unwrap();
        assert!(matches!(
            evaluate(&f1, &IsotropyCandidate::new(vec![MultiPoly::one()])),
            Err(PfisterError::ArityMismatch { .. })
        ));
        let cand = IsotropyCandidate::parse(&["t2", "1"]).unwrap();
        assert!(matches!(evaluate(&f1, &cand), Err(PfisterError::ForeignVariable { index: 0, .. })));
    }

    #[test]
    fn coefficient_monomials() {
        let f = PfisterForm::new(3).unwrap();
        assert_eq!(f.coefficient(0b101).to_string(), "t1*t3");
        assert!(f.coefficient(0).is_one());
    }
}
