//! Exact arithmetic in the tower `Q(i) ⊂ F = Q(i)(x, y) ⊂ K = F(sqrt(x))`.

pub mod gcd;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
mod serde_impls;
pub mod specialize;
pub mod tower;

pub use monomial::{Monomial, Var};
pub use parse::{parse_element, parse_poly, ParseError};
pub use poly::MultiPoly;
pub use ratfunc::RatFunc;
pub use scalar::BaseScalar;
pub use specialize::{PrimeField, SpecializationMap, DEFAULT_PRIME};
pub use tower::{RootSet, TowerElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("denominator vanishes under specialization")]
    DenominatorVanishes,
    #[error("no square root recorded for x{0}")]
    MissingRoot(u16),
    #[error("no value assigned to {0}")]
    MissingAssignment(String),
    #[error("{0} is not a prime congruent to 1 mod 4 below 2^32")]
    BadPrime(u64),
    #[error("invalid specialization: {0}")]
    InvalidSpecialization(String),
    #[error("parse error at {0}")]
    Parse(ParseError),
}

impl From<ParseError> for FieldError {
    fn from(e: ParseError) -> Self {
        FieldError::Parse(e)
    }
}
