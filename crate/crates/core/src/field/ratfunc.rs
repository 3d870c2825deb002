//! Rational functions over `Q(i)`, kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::gcd;
use super::monomial::{Monomial, Var};
use super::poly::{forward_owned, MultiPoly};
use super::scalar::BaseScalar;
use super::FieldError;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
///
/// Zero is `0 / 1`. Canonical form makes `==` decide equality in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc::normalized(num, den))
    }

    pub fn zero() -> Self {
        RatFunc { num: MultiPoly::zero(), den: MultiPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_poly(MultiPoly::from_int(n))
    }

    pub fn constant(c: BaseScalar) -> Self {
        RatFunc::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(MultiPoly::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        RatFunc::from_poly(MultiPoly::monomial(m))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BaseScalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// `c * m1 / m2` decomposition when both sides are single terms.
    pub fn as_laurent_term(&self) -> Option<(BaseScalar, Monomial, Monomial)> {
        let (nm, nc) = self.num.as_term()?;
        let (dm, dc) = self.den.as_term()?;
        Some((nc * &dc.inv()?, nm.clone(), dm.clone()))
    }

    pub fn inv(&self) -> Result<RatFunc, FieldError> {
        if self.num.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        // lowest terms are preserved by powers
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn scale(&self, c: &BaseScalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inv().expect("nonzero denominator");
            return RatFunc { num: num.scale(&inv), den: MultiPoly::one() };
        }
        let (num, den) = if den.num_terms() == 1 || num.num_terms() == 1 {
            let g = num.monomial_content().gcd(&den.monomial_content());
            (num.div_monomial(&g), den.div_monomial(&g))
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv().expect("nonzero leading coefficient");
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<BaseScalar> for RatFunc {
    fn from(c: BaseScalar) -> Self {
        RatFunc::constant(c)
    }
}

// Both denominators single-term: combine over the monomial lcm.
fn monomial_denominators(a: &RatFunc, b: &RatFunc) -> Option<(Monomial, BaseScalar, Monomial, BaseScalar)> {
    let (ma, ca) = a.den.as_term()?;
    let (mb, cb) = b.den.as_term()?;
    Some((ma.clone(), ca.clone(), mb.clone(), cb.clone()))
}

fn add_impl(a: &RatFunc, b: &RatFunc, negate_b: bool) -> RatFunc {
    let bnum = if negate_b { -&b.num } else { b.num.clone() };
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return RatFunc { num: bnum, den: b.den.clone() };
    }
    if a.den == b.den {
        if a.den.is_one() {
            return RatFunc { num: &a.num + &bnum, den: MultiPoly::one() };
        }
        return RatFunc::normalized(&a.num + &bnum, a.den.clone());
    }
    if let Some((ma, ca, mb, cb)) = monomial_denominators(a, b) {
        let l = ma.lcm(&mb);
        let fa = l.div(&ma).expect("lcm");
        let fb = l.div(&mb).expect("lcm");
        let ca_inv = ca.inv().expect("nonzero");
        let cb_inv = cb.inv().expect("nonzero");
        let num = &a.num.mul_term(&ca_inv, &fa) + &bnum.mul_term(&cb_inv, &fb);
        return RatFunc::normalized(num, MultiPoly::monomial(l));
    }
    let num = &(&a.num * &b.den) + &(&bnum * &a.den);
    RatFunc::normalized(num, &a.den * &b.den)
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add_impl(self, rhs, false)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add_impl(self, rhs, true)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: MultiPoly::one() };
        }
        // cross-cancel first so the final gcd works on smaller inputs
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff();
        let inv = lc.inv().expect("nonzero");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(RatFunc, Add add, Sub sub, Mul mul);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u16) -> RatFunc {
        RatFunc::var(Var::X(i))
    }
    fn y(i: u16) -> RatFunc {
        RatFunc::var(Var::Y(i))
    }

    #[test]
    fn cancellation_to_one() {
        let q = x(1).div(&x(1)).unwrap();
        assert!(q.is_one());
        assert!((&q - &RatFunc::one()).is_zero());
    }

    #[test]
    fn reduces_common_factors() {
        // (x^2 - y^2) / (x - y) = x + y
        let n = &x(1).pow(2) - &y(1).pow(2);
        let d = &x(1) - &y(1);
        let q = n.div(&d).unwrap();
        assert_eq!(q, &x(1) + &y(1));
        assert!(q.is_polynomial());
    }

    #[test]
    fn division_by_zero_rejected() {
        assert_eq!(x(1).div(&RatFunc::zero()), Err(FieldError::DivisionByZero));
        assert!(RatFunc::new(MultiPoly::one(), MultiPoly::zero()).is_err());
    }

    #[test]
    fn monomial_denominator_sum() {
        let a = RatFunc::one().div(&x(1)).unwrap();
        let b = RatFunc::one().div(&(&x(1) * &y(1))).unwrap();
        let s = &a + &b;
        // (y1 + 1) / (x1 y1)
        assert_eq!(s.num(), &(&MultiPoly::var(Var::Y(1)) + &MultiPoly::one()));
        assert_eq!(s.den(), &(&MultiPoly::var(Var::X(1)) * &MultiPoly::var(Var::Y(1))));
    }

    #[test]
    fn denominator_is_monic() {
        let q = RatFunc::new(MultiPoly::one(), MultiPoly::var(Var::X(1)).scale(&BaseScalar::from_int(-4))).unwrap();
        assert!(q.den().leading_coeff().is_one());
        assert_eq!(q.num().as_constant().unwrap(), BaseScalar::from_ratio(-1, 4));
    }
}
