//! Diagonal forms whose coefficients are distinct squarefree monomials in
//! independent indeterminates over `k`.
//!
//! Splitting on a variable `t` writes the form as `phi_0 + t * phi_1` with
//! `phi_0`, `phi_1` free of `t`; a zero would reduce (mod `t`, after clearing
//! common factors as in the Pfister descent) to a zero of `phi_0` or of
//! `phi_1`. Splitting until every part has at most one coefficient leaves
//! only one-dimensional forms, which are anisotropic.

use serde::{Deserialize, Serialize};

use super::{PfisterError, VerifyError};
use crate::field::{Monomial, Var};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialDiagonalForm {
    pub coefficients: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitNode {
    Leaf {
        coefficient: Option<Monomial>,
    },
    Split {
        var: Var,
        without: Box<SplitNode>,
        with: Box<SplitNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialCertificate {
    pub coefficients: Vec<Monomial>,
    pub tree: SplitNode,
}

fn is_squarefree(m: &Monomial) -> bool {
    m.powers().iter().all(|&(_, e)| e == 1)
}

fn split(coeffs: &[Monomial], var: Var) -> (Vec<Monomial>, Vec<Monomial>) {
    let mut without = Vec::new();
    let mut with = Vec::new();
    for c in coeffs {
        if c.degree_in(var) > 0 {
            with.push(c.div(&Monomial::var(var)).expect("var divides"));
        } else {
            without.push(c.clone());
        }
    }
    (without, with)
}

fn build(coeffs: Vec<Monomial>) -> SplitNode {
    if coeffs.len() <= 1 {
        return SplitNode::Leaf { coefficient: coeffs.into_iter().next() };
    }
    let var = coeffs.iter().flat_map(|c| c.vars().collect::<Vec<_>>()).max().expect("distinct monomials involve a variable");
    let (without, with) = split(&coeffs, var);
    SplitNode::Split { var, without: Box::new(build(without)), with: Box::new(build(with)) }
}

pub fn monomial_form_anisotropy(form: &MonomialDiagonalForm) -> Result<MonomialCertificate, PfisterError> {
    for (index, c) in form.coefficients.iter().enumerate() {
        if !is_squarefree(c) {
            return Err(PfisterError::NotSquarefree { index });
        }
        if let Some(first) = form.coefficients[..index].iter().position(|d| d == c) {
            return Err(PfisterError::DuplicateClass { first, second: index, class: c.to_string() });
        }
    }
    Ok(MonomialCertificate { coefficients: form.coefficients.clone(), tree: build(form.coefficients.clone()) })
}

fn replay(node: &SplitNode, coeffs: &[Monomial], counter: &mut usize) -> Result<(), VerifyError> {
    let step = *counter;
    *counter += 1;
    match node {
        SplitNode::Leaf { coefficient } => {
            if coeffs.len() > 1 {
                return Err(VerifyError::at(step, "leaf holds more than one coefficient"));
            }
            if coeffs.first() != coefficient.as_ref() {
                return Err(VerifyError::at(step, "leaf coefficient does not match"));
            }
            Ok(())
        }
        SplitNode::Split { var, without, with } => {
            if !coeffs.iter().any(|c| c.degree_in(*var) > 0) {
                return Err(VerifyError::at(step, format!("split variable {var} does not occur")));
            }
            let (w0, w1) = split(coeffs, *var);
            replay(without, &w0, counter)?;
            replay(with, &w1, counter)
        }
    }
}

/// Replays the split tree on the form's own coefficients; steps are counted
/// in depth-first order.
pub fn verify_monomial_certificate(form: &MonomialDiagonalForm, cert: &MonomialCertificate) -> Result<(), VerifyError> {
    if cert.coefficients != form.coefficients {
        return Err(VerifyError::at(0, "certificate is for a different form"));
    }
    if let Some(index) = form.coefficients.iter().position(|c| !is_squarefree(c)) {
        return Err(VerifyError::at(0, format!("coefficient {index} is not squarefree")));
    }
    replay(&cert.tree, &form.coefficients, &mut 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(k: u16) -> Monomial {
        Monomial::var(Var::Y(k))
    }

    fn form(c: Vec<Monomial>) -> MonomialDiagonalForm {
        MonomialDiagonalForm { coefficients: c }
    }

    #[test]
    fn two_fold_pfister_shape() {
        let f = form(vec![Monomial::one(), y(1), y(2), y(1).mul(&y(2))]);
        let cert = monomial_form_anisotropy(&f).unwrap();
        verify_monomial_certificate(&f, &cert).unwrap();
    }

    #[test]
    fn two_distinct_variables() {
        let f = form(vec![y(1), y(2)]);
        verify_monomial_certificate(&f, &monomial_form_anisotropy(&f).unwrap()).unwrap();
    }

    #[test]
    fn duplicates_and_squares_rejected() {
        let f = form(vec![Monomial::one(), Monomial::one()]);
        assert!(matches!(monomial_form_anisotropy(&f), Err(PfisterError::DuplicateClass { first: 0, second: 1, .. })));
        let f = form(vec![y(1).pow(2)]);
        assert!(matches!(monomial_form_anisotropy(&f), Err(PfisterError::NotSquarefree { index: 0 })));
    }

    #[test]
    fn tampered_tree_rejected() {
        let f = form(vec![Monomial::one(), y(1), y(2)]);
        let mut cert = monomial_form_anisotropy(&f).unwrap();
        if let SplitNode::Split { var, .. } = &mut cert.tree {
            *var = Var::Y(7);
        }
        assert_eq!(verify_monomial_certificate(&f, &cert).unwrap_err().step, 0);
        let leaf_only = MonomialCertificate { coefficients: f.coefficients.clone(), tree: SplitNode::Leaf { coefficient: None } };
        assert!(verify_monomial_certificate(&f, &leaf_only).is_err());
    }
}
