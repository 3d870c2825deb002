//! The multiquadratic extension `K = F(sqrt(x_1), ..., sqrt(x_a))`.
//!
//! An element is a sum over subsets `S` of `c_S * prod_{l in S} sqrt(x_l)`
//! with `c_S` in `F`. Subsets are bitmasks: bit `l - 1` stands for
//! `sqrt(x_l)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Monomial, Var};
use super::poly::{forward_owned, MultiPoly};
use super::ratfunc::RatFunc;
use super::scalar::BaseScalar;
use super::FieldError;

/// A set of adjoined square roots, as a bitmask over `1..=32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RootSet(pub u32);

impl RootSet {
    pub const EMPTY: RootSet = RootSet(0);

    pub fn single(l: u16) -> RootSet {
        assert!((1..=32).contains(&l), "root index out of range");
        RootSet(1 << (l - 1))
    }

    pub fn contains(self, l: u16) -> bool {
        self.0 & (1 << (l - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = u16> {
        (1..=32u16).filter(move |&l| self.0 & (1 << (l - 1)) != 0)
    }

    pub fn highest(self) -> Option<u16> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as u16)
        }
    }

    /// `prod_{l in self} x_l`.
    pub fn x_monomial(self) -> Monomial {
        Monomial::from_pairs(self.indices().map(|l| (Var::X(l), 1)))
    }
}

/// An element of `K`, with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TowerElement {
    coeffs: BTreeMap<RootSet, RatFunc>,
}

impl TowerElement {
    pub fn zero() -> Self {
        TowerElement { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        TowerElement::from_ratfunc(RatFunc::one())
    }

    pub fn from_int(n: i64) -> Self {
        TowerElement::from_ratfunc(RatFunc::from_int(n))
    }

    pub fn constant(c: BaseScalar) -> Self {
        TowerElement::from_ratfunc(RatFunc::constant(c))
    }

    pub fn i() -> Self {
        TowerElement::constant(BaseScalar::i())
    }

    pub fn var(v: Var) -> Self {
        TowerElement::from_ratfunc(RatFunc::var(v))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        TowerElement::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn from_ratfunc(c: RatFunc) -> Self {
        TowerElement::with_slot(RootSet::EMPTY, c)
    }

    /// `sqrt(x_l)`.
    pub fn sqrt_x(l: u16) -> Self {
        TowerElement::with_slot(RootSet::single(l), RatFunc::one())
    }

    /// `c * prod_{l in s} sqrt(x_l)`.
    pub fn with_slot(s: RootSet, c: RatFunc) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(s, c);
        }
        TowerElement { coeffs }
    }

    pub fn slots(&self) -> impl Iterator<Item = (RootSet, &RatFunc)> {
        self.coeffs.iter().map(|(s, c)| (*s, c))
    }

    pub fn coeff(&self, s: RootSet) -> RatFunc {
        self.coeffs.get(&s).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn num_slots(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact zero test; no tolerance.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_ratfunc().is_some_and(|c| c.is_one())
    }

    /// The element as a member of `F`, if it has no square-root part.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.coeffs.len() {
            0 => Some(RatFunc::zero()),
            1 => self.coeffs.get(&RootSet::EMPTY).cloned(),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<BaseScalar> {
        self.as_ratfunc()?.as_constant()
    }

    /// The single `(slot, coefficient)` pair of a one-slot element.
    pub fn as_single_slot(&self) -> Option<(RootSet, &RatFunc)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(s, c)| (*s, c))
        } else {
            None
        }
    }

    /// Union of the root indices appearing in any slot.
    pub fn root_support(&self) -> RootSet {
        RootSet(self.coeffs.keys().fold(0, |acc, s| acc | s.0))
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.coeffs.values().flat_map(|c| c.vars()).collect()
    }

    pub fn scale(&self, c: &RatFunc) -> TowerElement {
        if c.is_zero() {
            return TowerElement::zero();
        }
        TowerElement {
            coeffs: self.coeffs.iter().map(|(s, a)| (*s, a * c)).collect(),
        }
    }

    fn add_slot(&mut self, s: RootSet, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(s) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Replaces `sqrt(x_l)` by `-sqrt(x_l)`.
    pub fn conjugate(&self, l: u16) -> TowerElement {
        TowerElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, c)| (*s, if s.contains(l) { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Multiplicative inverse by repeated conjugation down the tower.
    pub fn inv(&self) -> Result<TowerElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::NotInvertible);
        }
        match self.root_support().highest() {
            None => {
                let c = self.coeffs.get(&RootSet::EMPTY).expect("nonzero base element");
                Ok(TowerElement::from_ratfunc(c.inv()?))
            }
            Some(l) => {
                let conj = self.conjugate(l);
                let norm = self * &conj;
                debug_assert!(!norm.root_support().contains(l));
                if norm.is_zero() {
                    return Err(FieldError::NotInvertible);
                }
                Ok(&conj * &norm.inv()?)
            }
        }
    }

    pub fn div(&self, rhs: &TowerElement) -> Result<TowerElement, FieldError> {
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(c) = rhs.as_ratfunc() {
            return Ok(self.scale(&c.inv()?));
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> TowerElement {
        let mut base = self.clone();
        let mut acc = TowerElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl From<RatFunc> for TowerElement {
    fn from(c: RatFunc) -> Self {
        TowerElement::from_ratfunc(c)
    }
}

impl From<MultiPoly> for TowerElement {
    fn from(p: MultiPoly) -> Self {
        TowerElement::from_poly(p)
    }
}

impl From<BaseScalar> for TowerElement {
    fn from(c: BaseScalar) -> Self {
        TowerElement::constant(c)
    }
}

impl From<i64> for TowerElement {
    fn from(n: i64) -> Self {
        TowerElement::from_int(n)
    }
}

impl<'a> Add<&'a TowerElement> for &'a TowerElement {
    type Output = TowerElement;
    fn add(self, rhs: &TowerElement) -> TowerElement {
        let mut out = self.clone();
        for (s, c) in &rhs.coeffs {
            out.add_slot(*s, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a TowerElement> for &'a TowerElement {
    type Output = TowerElement;
    fn sub(self, rhs: &TowerElement) -> TowerElement {
        let mut out = self.clone();
        for (s, c) in &rhs.coeffs {
            out.add_slot(*s, -c);
        }
        out
    }
}

impl<'a> Mul<&'a TowerElement> for &'a TowerElement {
    type Output = TowerElement;
    fn mul(self, rhs: &TowerElement) -> TowerElement {
        let mut out = TowerElement::zero();
        for (s, a) in &self.coeffs {
            for (t, b) in &rhs.coeffs {
                let shared = RootSet(s.0 & t.0);
                let mut c = a * b;
                if !shared.is_empty() {
                    c = &c * &RatFunc::monomial(shared.x_monomial());
                }
                out.add_slot(RootSet(s.0 ^ t.0), c);
            }
        }
        out
    }
}

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        TowerElement {
            coeffs: self.coeffs.iter().map(|(s, c)| (*s, -c)).collect(),
        }
    }
}

impl Neg for TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        -&self
    }
}

forward_owned!(TowerElement, Add add, Sub sub, Mul mul);

impl fmt::Display for TowerElement {
    /// Re-parseable: `c0 + (c1)*sqrt(x1) + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if s.is_empty() {
                write!(f, "({c})")?;
            } else {
                let roots: Vec<String> = s.indices().map(|l| format!("sqrt(x{l})")).collect();
                if c.is_one() {
                    write!(f, "{}", roots.join("*"))?;
                } else {
                    write!(f, "({c})*{}", roots.join("*"))?;
                }
            }
        }
        Ok(())
    }
}
