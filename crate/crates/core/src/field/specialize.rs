//! Ring homomorphisms from the tower into a prime field `F_p`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::monomial::Var;
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::scalar::BaseScalar;
use super::tower::TowerElement;
use super::FieldError;

/// Arithmetic modulo a prime below `2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(3..1 << 32).contains(&p) || !is_prime(p) {
            return Err(FieldError::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn reduce(self, a: u64) -> u64 {
        a % self.p
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn from_i64(self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r < BigInt::zero() {
            r += &p;
        }
        r.to_u64().expect("reduced residue fits")
    }

    /// Image of a Gaussian rational given the image `i` of the imaginary
    /// unit; `None` when a denominator is divisible by `p`.
    pub fn scalar(self, c: &BaseScalar, i: u64) -> Option<u64> {
        let part = |q: &num_rational::BigRational| -> Option<u64> {
            let d = self.inv(self.from_bigint(q.denom()))?;
            Some(self.mul(self.from_bigint(q.numer()), d))
        };
        Some(self.add(part(c.re())?, self.mul(part(c.im())?, i)))
    }

    /// A square root of -1; requires `p = 1 mod 4`.
    pub fn sqrt_minus_one(self) -> Option<u64> {
        if self.p % 4 != 1 {
            return None;
        }
        let target = self.p - 1;
        (2..self.p).map(|g| self.pow(g, (self.p - 1) / 4)).find(|&c| self.mul(c, c) == target)
    }

    /// A square root of `a`, by exhaustive search for small fields and
    /// Tonelli-Shanks otherwise.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if self.pow(a, (self.p - 1) / 2) != 1 {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| self.pow(z, (p - 1) / 2) == p - 1)?;
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p >= lower` with `p = 1 mod 4`.
pub fn next_prime_1_mod_4(lower: u64) -> u64 {
    let mut p = lower.max(5);
    while p % 4 != 1 {
        p += 1;
    }
    while !is_prime(p) {
        p += 4;
    }
    p
}

/// Default specialization prime: the first `p = 1 mod 4` above 10000.
pub const DEFAULT_PRIME: u64 = 10009;

/// Values for `x_l`, `y_l`, `sqrt(x_l)` and `i` in `F_p`.
///
/// Index `l - 1` of each vector holds the value for `x_l`, `y_l`, `sqrt(x_l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationMap {
    pub prime: u64,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub roots: Vec<u64>,
    pub sqrt_minus_one: u64,
}

impl SpecializationMap {
    /// Validates all invariants: `p = 1 mod 4`, `i^2 = -1`, `r_l^2 = x_l`,
    /// all `x_l`, `y_l` nonzero. `roots` may be shorter than `x`.
    pub fn new(prime: u64, x: Vec<u64>, y: Vec<u64>, roots: Vec<u64>, sqrt_minus_one: u64) -> Result<Self, FieldError> {
        let fp = PrimeField::new(prime)?;
        if prime % 4 != 1 {
            return Err(FieldError::BadPrime(prime));
        }
        if fp.mul(sqrt_minus_one, sqrt_minus_one) != prime - 1 {
            return Err(FieldError::InvalidSpecialization("assigned i does not square to -1".into()));
        }
        if x.iter().chain(y.iter()).any(|&v| v % prime == 0) {
            return Err(FieldError::InvalidSpecialization("x and y values must be nonzero".into()));
        }
        if roots.len() > x.len() {
            return Err(FieldError::InvalidSpecialization("more roots than x values".into()));
        }
        for (l, (&r, &a)) in roots.iter().zip(&x).enumerate() {
            if fp.mul(r, r) != a % prime {
                return Err(FieldError::InvalidSpecialization(format!("root for x{} does not square to it", l + 1)));
            }
        }
        Ok(SpecializationMap { prime, x, y, roots, sqrt_minus_one })
    }

    /// Random map with `count` pairs of variables: roots first, `x_l = r_l^2`.
    pub fn sample<R: Rng + ?Sized>(prime: u64, count: usize, rng: &mut R) -> Result<Self, FieldError> {
        let fp = PrimeField::new(prime)?;
        let i = fp.sqrt_minus_one().ok_or(FieldError::BadPrime(prime))?;
        let roots: Vec<u64> = (0..count).map(|_| rng.gen_range(1..prime)).collect();
        let x = roots.iter().map(|&r| fp.mul(r, r)).collect();
        let y = (0..count).map(|_| rng.gen_range(1..prime)).collect();
        SpecializationMap::new(prime, x, y, roots, i)
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.prime }
    }

    fn var_value(&self, v: Var) -> Result<u64, FieldError> {
        let lookup = |vals: &Vec<u64>, l: u16| vals.get(l as usize - 1).copied();
        match v {
            Var::X(l) => lookup(&self.x, l),
            Var::Y(l) => lookup(&self.y, l),
            _ => None,
        }
        .ok_or(FieldError::MissingAssignment(v.to_string()))
    }

    pub fn scalar(&self, c: &BaseScalar) -> Result<u64, FieldError> {
        self.field().scalar(c, self.sqrt_minus_one).ok_or(FieldError::DenominatorVanishes)
    }

    pub fn poly(&self, p: &MultiPoly) -> Result<u64, FieldError> {
        let fp = self.field();
        p.eval_with(
            0u64,
            |c| self.scalar(c),
            |v| self.var_value(v),
            |a, b| fp.add(a, b),
            |a, b| fp.mul(a, b),
            |a, e| fp.pow(a, e as u64),
        )
    }

    pub fn ratfunc(&self, q: &RatFunc) -> Result<u64, FieldError> {
        let fp = self.field();
        let d = self.poly(q.den())?;
        let dinv = fp.inv(d).ok_or(FieldError::DenominatorVanishes)?;
        Ok(fp.mul(self.poly(q.num())?, dinv))
    }

    /// Image of a tower element; `sqrt(x_l)` maps to the recorded root.
    pub fn specialize(&self, a: &TowerElement) -> Result<u64, FieldError> {
        let fp = self.field();
        let mut acc = 0;
        for (s, c) in a.slots() {
            let mut t = self.ratfunc(c)?;
            for l in s.indices() {
                let r = self.roots.get(l as usize - 1).copied().ok_or(FieldError::MissingRoot(l))?;
                t = fp.mul(t, r);
            }
            acc = fp.add(acc, t);
        }
        Ok(acc)
    }
}
