//! Sparse multivariate polynomials over `Q(i)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Monomial, Var};
use super::scalar::BaseScalar;

/// A polynomial stored as a map from monomial to nonzero coefficient.
///
/// The map is ordered by the graded-lex monomial order, so the leading term
/// is the last entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BaseScalar>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MultiPoly::constant(BaseScalar::one())
    }

    pub fn constant(c: BaseScalar) -> Self {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        MultiPoly::constant(BaseScalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(BaseScalar::one(), Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        MultiPoly::term(BaseScalar::one(), m)
    }

    pub fn term(c: BaseScalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BaseScalar)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BaseScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<BaseScalar> {
        match self.terms.len() {
            0 => Some(BaseScalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The single term of a monomial polynomial.
    pub fn as_term(&self) -> Option<(&Monomial, &BaseScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BaseScalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BaseScalar {
        self.leading_term().map(|t| t.1.clone()).unwrap_or_else(BaseScalar::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    /// Componentwise minimum of all exponent vectors.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    fn add_term(&mut self, m: Monomial, c: BaseScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &BaseScalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        if m.is_one() {
            return self.clone();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn mul_term(&self, c: &BaseScalar, m: &Monomial) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    /// Divides every exponent vector by `m`; `m` must divide every term.
    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        if m.is_one() {
            return self.clone();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.div(m).expect("monomial does not divide every term"), a.clone()))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => MultiPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
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

    /// Coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, k: u32) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e == k {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// All coefficients with respect to `v`, indexed by power.
    pub fn coeffs_in(&self, v: Var) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out.entry(e).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// Substitutes `v := value`.
    pub fn substitute(&self, v: Var, value: &BaseScalar) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e == 0 {
                out.add_term(rest, c.clone());
            } else if !value.is_zero() {
                out.add_term(rest, c * &value.pow(e));
            }
        }
        out
    }

    /// Substitutes `v := 0`.
    pub fn reduce_at_zero(&self, v: Var) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(v) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division. `None` if `d` does not divide `self` (or `d` is zero).
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (dlm, dlc) = d.leading_term()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        if d.num_terms() == 1 {
            let inv = dlc.inv()?;
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(dlm)?, c * &inv);
            }
            return Some(MultiPoly { terms });
        }
        let dlc_inv = dlc.inv()?;
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dlm)?;
            let qc = rc * &dlc_inv;
            rem = &rem - &d.mul_term(&qc, &qm);
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Pseudo-remainder of `self` by `b`, viewing both as univariate in `v`.
    pub fn pseudo_rem(&self, b: &MultiPoly, v: Var) -> MultiPoly {
        let db = b.degree_in(v);
        let lcb = b.coeff_of(v, db);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(v);
            if dr < db {
                break;
            }
            let lcr = r.coeff_of(v, dr);
            let shift = Monomial::var_pow(v, dr - db);
            r = &(&r * &lcb) - &(&lcr.mul_monomial(&shift) * b);
        }
        r
    }

    /// Evaluates with a per-variable assignment callback.
    pub fn eval_with<T, E>(
        &self,
        zero: T,
        scalar: impl Fn(&BaseScalar) -> Result<T, E>,
        var: impl Fn(Var) -> Result<T, E>,
        add: impl Fn(T, T) -> T,
        mul: impl Fn(T, T) -> T,
        pow: impl Fn(T, u32) -> T,
    ) -> Result<T, E>
    where
        T: Clone,
    {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = scalar(c)?;
            for &(v, e) in m.powers() {
                t = mul(t, pow(var(v)?, e));
            }
            acc = add(acc, t);
        }
        Ok(acc)
    }
}

impl From<BaseScalar> for MultiPoly {
    fn from(c: BaseScalar) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $f(self, rhs: &'a $t) -> $t { (&self).$f(rhs) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(MultiPoly, Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    /// Highest term first; output re-parses with the expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff = if mag.is_compound() || !mag.is_real() { format!("({mag})") } else { format!("{mag}") };
            if m.is_one() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}
