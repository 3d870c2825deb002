//! Gaussian rationals: the base field `Q(i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element `re + im*i` of `Q(i)`.
///
/// Both parts are reduced fractions, so structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseScalar {
    re: BigRational,
    im: BigRational,
}

impl BaseScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        BaseScalar { re, im }
    }

    pub fn zero() -> Self {
        BaseScalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        BaseScalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        BaseScalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        BaseScalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        BaseScalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        BaseScalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BaseScalar::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(BaseScalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BaseScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A square root inside `Q(i)`, if one exists.
    ///
    /// Solves `(c + d i)^2 = a + b i`, i.e. `c^2 - d^2 = a`, `2cd = b`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(BaseScalar::zero());
        }
        let a = &self.re;
        let b = &self.im;
        if b.is_zero() {
            if let Some(c) = rational_sqrt(a) {
                return Some(BaseScalar::from_rational(c));
            }
            let neg = -a.clone();
            return rational_sqrt(&neg).map(|d| BaseScalar::new(BigRational::zero(), d));
        }
        let n = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let c2 = (a + &n) / &two;
        let c = rational_sqrt(&c2)?;
        if c.is_zero() {
            return None;
        }
        let d = b / (&two * &c);
        Some(BaseScalar::new(c, d))
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

impl Default for BaseScalar {
    fn default() -> Self {
        BaseScalar::zero()
    }
}

impl From<i64> for BaseScalar {
    fn from(n: i64) -> Self {
        BaseScalar::from_int(n)
    }
}

impl<'a> Add<&'a BaseScalar> for &'a BaseScalar {
    type Output = BaseScalar;
    fn add(self, rhs: &BaseScalar) -> BaseScalar {
        BaseScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a BaseScalar> for &'a BaseScalar {
    type Output = BaseScalar;
    fn sub(self, rhs: &BaseScalar) -> BaseScalar {
        BaseScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a BaseScalar> for &'a BaseScalar {
    type Output = BaseScalar;
    fn mul(self, rhs: &BaseScalar) -> BaseScalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return BaseScalar::from_rational(&self.re * &rhs.re);
        }
        BaseScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &BaseScalar {
    type Output = BaseScalar;
    fn neg(self) -> BaseScalar {
        BaseScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for BaseScalar {
    type Output = BaseScalar;
    fn neg(self) -> BaseScalar {
        BaseScalar::new(-self.re, -self.im)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl BaseScalar {
    /// True when the textual form needs parentheses as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        let both = !self.re.is_zero() && !self.im.is_zero();
        let frac = (!self.re.is_zero() && !self.re.denom().is_one())
            || (!self.im.is_zero() && !self.im.denom().is_one());
        both || frac
    }
}

impl fmt::Display for BaseScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |q: &BigRational| -> String {
            if q.is_one() {
                "i".to_string()
            } else if (-q.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(q))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{} - {}", fmt_rational(&self.re), im_part(&-self.im.clone()))
                } else {
                    write!(f, "{} + {}", fmt_rational(&self.re), im_part(&self.im))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = BaseScalar::i();
        assert_eq!(&i * &i, BaseScalar::from_int(-1));
    }

    #[test]
    fn inverse_round_trip() {
        let z = BaseScalar::new(BigRational::new(3.into(), 4.into()), BigRational::from_integer((-2).into()));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(BaseScalar::zero().inv().is_none());
    }

    #[test]
    fn square_roots_in_gaussian_rationals() {
        // -1 = i^2, 2i = (1+i)^2, 2 has no root
        let m1 = BaseScalar::from_int(-1).sqrt().unwrap();
        assert_eq!(&m1 * &m1, BaseScalar::from_int(-1));
        let two_i = BaseScalar::new(BigRational::zero(), BigRational::from_integer(2.into()));
        let r = two_i.sqrt().unwrap();
        assert_eq!(&r * &r, two_i);
        assert!(BaseScalar::from_int(2).sqrt().is_none());
        let q = BaseScalar::from_ratio(9, 4).sqrt().unwrap();
        assert_eq!(q, BaseScalar::from_ratio(3, 2));
        // (3 + 4i) = (2 + i)^2
        let z = BaseScalar::new(BigRational::from_integer(3.into()), BigRational::from_integer(4.into()));
        let r = z.sqrt().unwrap();
        assert_eq!(&r * &r, z);
    }
}
