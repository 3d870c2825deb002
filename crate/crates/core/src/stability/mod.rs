//! Stability of skew tuples: symbolic eigenspace certificates and the
//! specialization oracle.

pub mod anisotropy;
pub mod certificate;
pub mod eigen;
mod fp;
pub mod isotropy;
pub mod pairing;
pub mod specialized;

pub use anisotropy::{certify_anisotropic, certify_coefficients, verify_anisotropy, AnisotropyCertificate, AnisotropyFailure};
pub use certificate::{
    symbolic_certificate, verify_symbolic, CertificateMode, EigenspaceCertificate, EigenspaceOutcome, StabilityCertificate,
    SymbolicCertificate, Verdict,
};
pub use eigen::{eigen_system, EigenSystem, EigenVector, Eigenspace};
pub use isotropy::{is_invariant, is_isotropic_subspace, spin, KSubspace};
pub use pairing::{pairing_quadratic_form, DiagonalQuadraticForm, PairingKind};
pub use specialized::{
    specialized_stability, verify_specialized, OracleOptions, SpecializedCertificate, StableReason, TrialOutcome, TrialRecord,
};

use crate::algebra::AlgebraError;
use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("lambda_1 is not diagonal on the working basis")]
    NotDiagonalizable,
    #[error("pairing form has cross terms between eigenvectors")]
    CrossTermsPresent,
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
    #[error("no usable specialization after {0} attempts")]
    ResamplingExhausted(usize),
    #[error("symbolic certification needs a tuple from the explicit families")]
    NotConstructed,
    #[error("trial count must be positive")]
    NoTrials,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
