use std::cmp::Ordering;
use std::fmt;

/// A polynomial indeterminate. Indices are 1-based.
///
/// `X`/`Y` are the function-field generators `x_l`, `y_l`; `T` are the
/// Pfister variables; `L` are fresh symbols used for generic eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(u16),
    Y(u16),
    T(u16),
    L(u16),
}

impl Var {
    pub fn index(self) -> u16 {
        match self {
            Var::X(i) | Var::Y(i) | Var::T(i) | Var::L(i) => i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::T(i) => write!(f, "t{i}"),
            Var::L(i) => write!(f, "l{i}"),
        }
    }
}

/// A power product, stored sparsely as `(var, exponent)` pairs sorted by
/// variable with strictly positive exponents.
///
/// `Ord` is graded lexicographic: total degree first, then the exponent of
/// the smallest variable decides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { powers: vec![(v, e)] }
        }
    }

    /// Builds from arbitrary pairs; merges duplicates and drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut powers: Vec<(Var, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        powers.sort_by_key(|p| p.0);
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { powers: merged }
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|p| p.1).sum()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.powers
            .binary_search_by_key(&v, |p| p.0)
            .map(|k| self.powers[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| Some(a + b))
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(self.merge(other, |a, b| if a > b { Some(a - b) } else { None }))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.powers.iter().all(|&(v, e)| other.degree_in(v) >= e)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let powers = self
            .powers
            .iter()
            .filter_map(|&(v, e)| {
                let f = other.degree_in(v);
                if f > 0 {
                    Some((v, e.min(f)))
                } else {
                    None
                }
            })
            .collect();
        Monomial { powers }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| Some(a.max(b)))
    }

    /// Drops `v` from the monomial, returning the removed exponent.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        let e = self.degree_in(v);
        let rest = Monomial {
            powers: self.powers.iter().copied().filter(|p| p.0 != v).collect(),
        };
        (e, rest)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            powers: self.powers.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.powers.iter().map(|p| p.0)
    }

    fn merge(&self, other: &Monomial, op: impl Fn(u32, u32) -> Option<u32>) -> Monomial {
        let (a, b) = (&self.powers, &other.powers);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, ea, eb) = match (a.get(i), b.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, ea, eb)
                    }
                    Ordering::Less => {
                        i += 1;
                        (va, ea, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, 0, eb)
                    }
                },
                (Some(&(va, ea)), None) => {
                    i += 1;
                    (va, ea, 0)
                }
                (None, Some(&(vb, eb))) => {
                    j += 1;
                    (vb, 0, eb)
                }
                (None, None) => unreachable!(),
            };
            if let Some(e) = op(ea, eb) {
                if e > 0 {
                    out.push((v, e));
                }
            }
        }
        Monomial { powers: out }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.powers, &other.powers);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.powers.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
