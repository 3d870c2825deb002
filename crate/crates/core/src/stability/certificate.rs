//! Stability certificates and their verification.

use serde::{Deserialize, Serialize};

use super::anisotropy::{certify_anisotropic, verify_anisotropy, AnisotropyCertificate, AnisotropyFailure};
use super::eigen::eigen_system;
use super::pairing::{pairing_quadratic_form, DiagonalQuadraticForm};
use super::specialized::{specialized_stability, verify_specialized, OracleOptions, SpecializedCertificate};
use super::StabilityError;
use crate::construct::{CaseTag, StableTupleCandidate};
use crate::pfister::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Inconclusive,
    #[serde(rename = "Unstable-witness")]
    UnstableWitness,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "Stable",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::UnstableWitness => "Unstable-witness",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateMode {
    Symbolic,
    Specialized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum EigenspaceOutcome {
    Certified { certificate: AnisotropyCertificate },
    /// Not a proof of isotropy.
    Failed { failure: AnisotropyFailure },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceCertificate {
    pub form: DiagonalQuadraticForm,
    pub outcome: EigenspaceOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicCertificate {
    pub eigenspaces: Vec<EigenspaceCertificate>,
    pub verdict: Verdict,
}

/// Certifies every eigenvalue's pairing form. Only tuples from the
/// explicit families carry the eigenspace argument; custom tuples go to
/// the oracle.
pub fn symbolic_certificate(t: &StableTupleCandidate) -> Result<SymbolicCertificate, StabilityError> {
    if t.case == CaseTag::Custom {
        return Err(StabilityError::NotConstructed);
    }
    let system = eigen_system(t)?;
    let mut eigenspaces = Vec::with_capacity(system.spaces.len());
    for space in &system.spaces {
        let form = pairing_quadratic_form(t, space)?;
        let outcome = match certify_anisotropic(&form) {
            Ok(certificate) => EigenspaceOutcome::Certified { certificate },
            Err(failure) => EigenspaceOutcome::Failed { failure },
        };
        eigenspaces.push(EigenspaceCertificate { form, outcome });
    }
    let all = eigenspaces.iter().all(|e| matches!(e.outcome, EigenspaceOutcome::Certified { .. }));
    let verdict = if all { Verdict::Stable } else { Verdict::Inconclusive };
    Ok(SymbolicCertificate { eigenspaces, verdict })
}

/// Recomputes the eigenspaces and pairing forms and re-checks each
/// anisotropy certificate. Step `k` is eigenspace `k`.
pub fn verify_symbolic(t: &StableTupleCandidate, cert: &SymbolicCertificate) -> Result<(), VerifyError> {
    if t.case == CaseTag::Custom {
        return Err(VerifyError::at(0, "symbolic certificates need a constructed tuple"));
    }
    let system = eigen_system(t).map_err(|e| VerifyError::at(0, e.to_string()))?;
    if system.spaces.len() != cert.eigenspaces.len() {
        return Err(VerifyError::at(0, "eigenspace count differs"));
    }
    for (k, (space, rec)) in system.spaces.iter().zip(&cert.eigenspaces).enumerate() {
        let form = pairing_quadratic_form(t, space).map_err(|e| VerifyError::at(k, e.to_string()))?;
        if form != rec.form {
            return Err(VerifyError::at(k, "recorded pairing form differs from the recomputed one"));
        }
        if let EigenspaceOutcome::Certified { certificate } = &rec.outcome {
            if certificate.coefficients != form.coefficients {
                return Err(VerifyError::at(k, "certificate coefficients differ from the form"));
            }
            verify_anisotropy(certificate).map_err(|e| VerifyError::at(k, format!("anisotropy step {}: {}", e.step, e.reason)))?;
        }
    }
    let all = cert.eigenspaces.iter().all(|e| matches!(e.outcome, EigenspaceOutcome::Certified { .. }));
    let expected = if all { Verdict::Stable } else { Verdict::Inconclusive };
    if cert.verdict != expected {
        return Err(VerifyError::at(cert.eigenspaces.len(), "verdict does not follow from the eigenspaces"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub mode: CertificateMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<SymbolicCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialized: Option<SpecializedCertificate>,
    pub verdict: Verdict,
}

impl StabilityCertificate {
    pub fn symbolic(t: &StableTupleCandidate) -> Result<Self, StabilityError> {
        let c = symbolic_certificate(t)?;
        Ok(StabilityCertificate { mode: CertificateMode::Symbolic, verdict: c.verdict, symbolic: Some(c), specialized: None })
    }

    pub fn specialized(t: &StableTupleCandidate, options: OracleOptions) -> Result<Self, StabilityError> {
        let c = specialized_stability(t, options)?;
        Ok(StabilityCertificate { mode: CertificateMode::Specialized, verdict: c.verdict, symbolic: None, specialized: Some(c) })
    }

    pub fn verify(&self, t: &StableTupleCandidate) -> Result<(), VerifyError> {
        let inner = match (self.mode, &self.symbolic, &self.specialized) {
            (CertificateMode::Symbolic, Some(c), None) => {
                verify_symbolic(t, c)?;
                c.verdict
            }
            (CertificateMode::Specialized, None, Some(c)) => {
                verify_specialized(t, c)?;
                c.verdict
            }
            _ => return Err(VerifyError::at(0, "mode does not match the attached certificate")),
        };
        if inner != self.verdict {
            return Err(VerifyError::at(0, "top-level verdict differs from the certificate"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_tuple, planted_block_tuple, ConstructionParams, Group};

    fn tuple(group: Group, alpha: u32, s: u32) -> StableTupleCandidate {
        build_tuple(&ConstructionParams::new(group, alpha, s, 2).unwrap()).unwrap()
    }

    #[test]
    fn symbolic_round_trip() {
        let t = tuple(Group::Sp, 2, 1);
        let c = StabilityCertificate::symbolic(&t).unwrap();
        assert_eq!(c.verdict, Verdict::Stable);
        c.verify(&t).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: StabilityCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        back.verify(&t).unwrap();
    }

    #[test]
    fn tampered_form_fails() {
        let t = tuple(Group::So, 1, 3);
        let mut c = symbolic_certificate(&t).unwrap();
        c.eigenspaces[1].form.coefficients[0] = crate::field::TowerElement::one();
        assert_eq!(verify_symbolic(&t, &c).unwrap_err().step, 1);
    }

    #[test]
    fn custom_tuples_need_the_oracle() {
        assert_eq!(symbolic_certificate(&planted_block_tuple()), Err(StabilityError::NotConstructed));
    }

    #[test]
    fn verdict_serializes_with_hyphen() {
        assert_eq!(serde_json::to_string(&Verdict::UnstableWitness).unwrap(), "\"Unstable-witness\"");
    }
}
