//! Replayable descent showing `sum_I t_I f_I^2 != 0` for a nonzero vector.
//!
//! One step at level `n` takes a nonzero vector `f` for the `n`-fold form,
//! divides out `g = gcd(f_I)`, and reduces modulo `t_n`. Writing `S0` for the
//! subsets without `n` and `S1` for those with it:
//!
//! * untwisted: some `f'_I mod t_n` with `I` in `S0` is nonzero. The reduced
//!   value is the `(n-1)`-fold form at `(f'_I mod t_n)_{I in S0}`, nonzero by
//!   the next step.
//! * twisted: `t_n` divides every `f'_I` with `I` in `S0`. A zero would give
//!   `t_n | sum_{I in S1} t_{I-n} f'_I^2`, so the `(n-1)`-fold form vanishes at
//!   `(f'_I mod t_n)_{I in S1}`, which is nonzero because `t_n` is not a common
//!   factor of the stripped vector.
//!
//! The chain ends at `n = 0` with a single nonzero polynomial.

use serde::{Deserialize, Serialize};

use super::{IsotropyCandidate, PfisterError, PfisterForm, VerifyError};
use crate::field::gcd::gcd_all;
use crate::field::{parse_poly, MultiPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Untwisted,
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub level: usize,
    pub input: Vec<String>,
    pub gcd: String,
    pub stripped: Vec<String>,
    pub branch: Branch,
    pub next: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCertificate {
    pub arity: usize,
    pub value: String,
    pub steps: Vec<DescentStep>,
    /// The final 1-entry vector, nonzero.
    pub base: String,
}

fn strings(v: &[MultiPoly]) -> Vec<String> {
    v.iter().map(|p| p.to_string()).collect()
}

fn reduce_all(v: &[MultiPoly], var: Var) -> Vec<MultiPoly> {
    v.iter().map(|p| p.reduce_at_zero(var)).collect()
}

fn halves(v: &[MultiPoly], level: usize) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
    let bit = 1 << (level - 1);
    let s0 = (0..v.len()).filter(|i| i & bit == 0).map(|i| v[i].clone()).collect();
    let s1 = (0..v.len()).filter(|i| i & bit != 0).map(|i| v[i].clone()).collect();
    (s0, s1)
}

pub fn descent_certificate(form: &PfisterForm, cand: &IsotropyCandidate) -> Result<DescentCertificate, PfisterError> {
    let value = super::evaluate(form, cand)?;
    if cand.is_zero() {
        return Err(PfisterError::ZeroCandidate);
    }
    let mut cur = cand.f.clone();
    let mut steps = Vec::new();
    for level in (1..=form.arity()).rev() {
        let g = gcd_all(cur.iter());
        let stripped: Vec<MultiPoly> = cur.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect();
        let tn = Var::T(level as u16);
        let (s0, s1) = halves(&stripped, level);
        let r0 = reduce_all(&s0, tn);
        let (branch, next) = if r0.iter().any(|p| !p.is_zero()) {
            (Branch::Untwisted, r0)
        } else {
            (Branch::Twisted, reduce_all(&s1, tn))
        };
        debug_assert!(next.iter().any(|p| !p.is_zero()));
        steps.push(DescentStep {
            level,
            input: strings(&cur),
            gcd: g.to_string(),
            stripped: strings(&stripped),
            branch,
            next: strings(&next),
        });
        cur = next;
    }
    Ok(DescentCertificate { arity: form.arity(), value: value.to_string(), steps, base: cur[0].to_string() })
}

fn parse_all(v: &[String], step: usize) -> Result<Vec<MultiPoly>, VerifyError> {
    v.iter().map(|s| parse_poly(s).map_err(|e| VerifyError::at(step, format!("unparseable polynomial: {e}")))).collect()
}

/// Re-executes every step. Errors carry the 0-based step index; the base
/// check reports index `steps.len()`.
pub fn verify_descent(form: &PfisterForm, cand: &IsotropyCandidate, cert: &DescentCertificate) -> Result<(), VerifyError> {
    let value = super::evaluate(form, cand).map_err(|e| VerifyError::at(0, e.to_string()))?;
    if cert.arity != form.arity() || cert.steps.len() != form.arity() {
        return Err(VerifyError::at(0, "step count does not match the arity"));
    }
    let claimed = parse_poly(&cert.value).map_err(|e| VerifyError::at(0, e.to_string()))?;
    if claimed != value {
        return Err(VerifyError::at(0, "recorded form value differs from the evaluation"));
    }
    let mut cur = cand.f.clone();
    for (k, step) in cert.steps.iter().enumerate() {
        let level = form.arity() - k;
        if step.level != level {
            return Err(VerifyError::at(k, "level out of sequence"));
        }
        let input = parse_all(&step.input, k)?;
        if input != cur {
            return Err(VerifyError::at(k, "input differs from the previous step's output"));
        }
        let g = parse_poly(&step.gcd).map_err(|e| VerifyError::at(k, e.to_string()))?;
        if g.is_zero() {
            return Err(VerifyError::at(k, "zero common factor"));
        }
        let stripped = parse_all(&step.stripped, k)?;
        if stripped.len() != cur.len() || stripped.iter().zip(&cur).any(|(s, c)| &(s * &g) != c) {
            return Err(VerifyError::at(k, "stripped vector times the common factor does not give the input"));
        }
        let tn = Var::T(level as u16);
        let (s0, s1) = halves(&stripped, level);
        let r0 = reduce_all(&s0, tn);
        let next = parse_all(&step.next, k)?;
        let expected = match step.branch {
            Branch::Untwisted => {
                if r0.iter().all(|p| p.is_zero()) {
                    return Err(VerifyError::at(k, "untwisted branch but every S0 entry vanishes mod t_n"));
                }
                r0
            }
            Branch::Twisted => {
                if r0.iter().any(|p| !p.is_zero()) {
                    return Err(VerifyError::at(k, "twisted branch but t_n does not divide every S0 entry"));
                }
                reduce_all(&s1, tn)
            }
        };
        if next != expected {
            return Err(VerifyError::at(k, "reduced vector does not match"));
        }
        if next.iter().all(|p| p.is_zero()) {
            return Err(VerifyError::at(k, "reduced vector is zero"));
        }
        cur = next;
    }
    let base = parse_poly(&cert.base).map_err(|e| VerifyError::at(cert.steps.len(), e.to_string()))?;
    if cur.len() != 1 || base != cur[0] || base.is_zero() {
        return Err(VerifyError::at(cert.steps.len(), "base entry is missing or zero"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(v: &[&str]) -> IsotropyCandidate {
        IsotropyCandidate::parse(v).unwrap()
    }

    #[test]
    fn one_fold() {
        let f = PfisterForm::new(1).unwrap();
        let c = cand(&["t1 + 2", "3*t1"]);
        let cert = descent_certificate(&f, &c).unwrap();
        assert_eq!(cert.steps.len(), 1);
        verify_descent(&f, &c, &cert).unwrap();
    }

    #[test]
    fn two_step_chain() {
        let f = PfisterForm::new(2).unwrap();
        let c = cand(&["t2", "0", "1", "0"]);
        let cert = descent_certificate(&f, &c).unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert_eq!(cert.steps[0].branch, Branch::Twisted);
        assert_eq!(cert.steps[1].branch, Branch::Untwisted);
        verify_descent(&f, &c, &cert).unwrap();
    }

    #[test]
    fn zero_candidate_rejected() {
        let f = PfisterForm::new(2).unwrap();
        assert_eq!(descent_certificate(&f, &cand(&["0", "0", "0", "0"])), Err(PfisterError::ZeroCandidate));
    }

    #[test]
    fn common_factor_stripped() {
        let f = PfisterForm::new(2).unwrap();
        let c = cand(&["t1*t2", "t2^2", "t2*(t1 + 1)", "0"]);
        let cert = descent_certificate(&f, &c).unwrap();
        assert_eq!(parse_poly(&cert.steps[0].gcd).unwrap(), MultiPoly::var(Var::T(2)));
        verify_descent(&f, &c, &cert).unwrap();
    }

    #[test]
    fn tamper_detected_at_step() {
        let f = PfisterForm::new(2).unwrap();
        let c = cand(&["t2", "0", "1", "0"]);
        let mut cert = descent_certificate(&f, &c).unwrap();
        cert.steps[1].next = vec!["2".into()];
        assert_eq!(verify_descent(&f, &c, &cert).unwrap_err().step, 1);
        let mut cert = descent_certificate(&f, &c).unwrap();
        cert.steps[0].gcd = "t2".into();
        assert_eq!(verify_descent(&f, &c, &cert).unwrap_err().step, 0);
    }
}
