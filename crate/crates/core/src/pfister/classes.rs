//! Square classes of Laurent monomials.
//!
//! `K = k(sqrt(x_1), ..., sqrt(x_a), y_1, ..., y_a)` is purely transcendental
//! over `k = Q(i)` on `u_l = sqrt(x_l)` and `y_l`, so a Laurent monomial
//! `c * prod u_l^{e_l} prod y_l^{f_l}` is `c` times a square times the
//! squarefree monomial of the odd exponents. In a class monomial, `X(l)`
//! stands for the generator `u_l` when working over `K`, and for `x_l` when
//! working over `F`.

use serde::{Deserialize, Serialize};

use super::monomial_form::{monomial_form_anisotropy, verify_monomial_certificate, MonomialCertificate, MonomialDiagonalForm};
use super::PfisterError;
use crate::field::{BaseScalar, Monomial, TowerElement, Var};

/// `r = root^2 * cofactor^2 * class`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClass {
    pub class: Monomial,
    pub root: BaseScalar,
    pub cofactor: TowerElement,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error("not a single Laurent monomial")]
    NotMonomial,
    #[error("scalar {0} is not a square in Q(i)")]
    NonSquareScalar(String),
    #[error("square root of x{0} present over F")]
    RootOverBase(u16),
}

fn generator(v: Var, over_roots: bool) -> TowerElement {
    match v {
        Var::X(l) if over_roots => TowerElement::sqrt_x(l),
        _ => TowerElement::var(v),
    }
}

/// The class monomial as an element of `K`.
pub fn class_element(class: &Monomial, over_roots: bool) -> TowerElement {
    class.powers().iter().fold(TowerElement::one(), |acc, &(v, e)| &acc * &generator(v, over_roots).pow(e))
}

fn signed_power(base: &TowerElement, e: i64) -> TowerElement {
    let p = base.pow(e.unsigned_abs() as u32);
    if e < 0 {
        p.inv().expect("generators are nonzero")
    } else {
        p
    }
}

/// Square class of a nonzero Laurent monomial, over `K` (`over_roots`) or
/// over `F`.
pub fn square_class(r: &TowerElement, over_roots: bool) -> Result<SquareClass, ClassError> {
    let (slot, coeff) = r.as_single_slot().ok_or(ClassError::NotMonomial)?;
    let (c, num, den) = coeff.as_laurent_term().ok_or(ClassError::NotMonomial)?;
    if !over_roots {
        if let Some(l) = slot.highest() {
            return Err(ClassError::RootOverBase(l));
        }
    }
    let mut exps: std::collections::BTreeMap<Var, i64> = std::collections::BTreeMap::new();
    let weight = |v: Var| if over_roots && matches!(v, Var::X(_)) { 2 } else { 1 };
    for &(v, e) in num.powers() {
        *exps.entry(v).or_default() += weight(v) * e as i64;
    }
    for &(v, e) in den.powers() {
        *exps.entry(v).or_default() -= weight(v) * e as i64;
    }
    for l in slot.indices() {
        *exps.entry(Var::X(l)).or_default() += 1;
    }
    let root = c.sqrt().ok_or_else(|| ClassError::NonSquareScalar(c.to_string()))?;
    let class = Monomial::from_pairs(exps.iter().filter(|(_, e)| e.rem_euclid(2) == 1).map(|(v, _)| (*v, 1)));
    let cofactor = exps
        .iter()
        .fold(TowerElement::one(), |acc, (v, e)| &acc * &signed_power(&generator(*v, over_roots), e.div_euclid(2)));
    Ok(SquareClass { class, root, cofactor })
}

impl SquareClass {
    /// Whether `root^2 * cofactor^2 * class` reproduces `r`.
    pub fn reproduces(&self, r: &TowerElement, over_roots: bool) -> bool {
        let w = TowerElement::constant(self.root.clone());
        let sq = &(&w * &self.cofactor) * &(&w * &self.cofactor);
        &sq * &class_element(&self.class, over_roots) == *r
    }
}

/// The quaternion norm form `<1, -x_l, -y_l, x_l y_l>` normalized to
/// `<<x_l, y_l>>` and certified anisotropic over `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormFormReport {
    pub index: u16,
    pub coefficients: Vec<TowerElement>,
    pub classes: Vec<SquareClass>,
    pub certificate: MonomialCertificate,
}

pub fn quaternion_norm_check(l: u16) -> Result<NormFormReport, PfisterError> {
    let x = TowerElement::var(Var::X(l));
    let y = TowerElement::var(Var::Y(l));
    let coefficients = vec![TowerElement::one(), -&x, -&y, &x * &y];
    let classes: Vec<SquareClass> = coefficients.iter().map(|c| square_class(c, false).expect("monomial coefficients")).collect();
    let form = MonomialDiagonalForm { coefficients: classes.iter().map(|c| c.class.clone()).collect() };
    let certificate = monomial_form_anisotropy(&form)?;
    Ok(NormFormReport { index: l, coefficients, classes, certificate })
}

impl NormFormReport {
    pub fn verify(&self) -> bool {
        let form = MonomialDiagonalForm { coefficients: self.classes.iter().map(|c| c.class.clone()).collect() };
        self.coefficients.len() == self.classes.len()
            && self.coefficients.iter().zip(&self.classes).all(|(r, c)| c.reproduces(r, false))
            && verify_monomial_certificate(&form, &self.certificate).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_element;

    fn cls(s: &str, over_roots: bool) -> SquareClass {
        let r = parse_element(s).unwrap();
        let c = square_class(&r, over_roots).unwrap();
        assert!(c.reproduces(&r, over_roots), "{s}");
        c
    }

    #[test]
    fn absorbs_minus_one_and_squares() {
        assert!(cls("-4*y1^3", true).class == Monomial::var(Var::Y(1)));
        assert_eq!(cls("-1", true).root, BaseScalar::i());
    }

    #[test]
    fn roots_are_generators() {
        let c = cls("y1/sqrt(x2)", true);
        assert_eq!(c.class.to_string(), "x2*y1");
        let c = cls("x1*sqrt(x1)", true);
        assert_eq!(c.class, Monomial::var(Var::X(1)));
        assert!(cls("x1", true).class.is_one());
        assert_eq!(cls("x1", false).class, Monomial::var(Var::X(1)));
    }

    #[test]
    fn failures() {
        assert_eq!(square_class(&parse_element("2*y1").unwrap(), true), Err(ClassError::NonSquareScalar("2".into())));
        assert_eq!(square_class(&parse_element("1 + y1").unwrap(), true), Err(ClassError::NotMonomial));
        assert_eq!(square_class(&parse_element("sqrt(x1)").unwrap(), false), Err(ClassError::RootOverBase(1)));
    }

    #[test]
    fn norm_form_is_two_fold_pfister() {
        let r = quaternion_norm_check(1).unwrap();
        let classes: Vec<String> = r.classes.iter().map(|c| c.class.to_string()).collect();
        assert_eq!(classes, ["1", "x1", "y1", "x1*y1"]);
        assert!(r.verify());
    }
}
