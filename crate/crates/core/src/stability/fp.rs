//! Dense linear algebra over a word-sized prime field.

use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub n: usize,
    pub a: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(n: usize) -> Self {
        FpMatrix { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for k in 0..n {
            m.a[k * n + k] = 1;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.a[r * self.n + c]
    }

    pub fn mul(&self, fp: PrimeField, rhs: &FpMatrix) -> FpMatrix {
        let n = self.n;
        let mut out = FpMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] = fp.add(out.a[i * n + j], fp.mul(x, rhs.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, fp: PrimeField, v: &[u64]) -> Vec<u64> {
        (0..self.n).map(|i| (0..self.n).fold(0, |acc, k| fp.add(acc, fp.mul(self.get(i, k), v[k])))).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let n = self.n;
        FpMatrix { n, a: (0..n * n).map(|k| self.get(k % n, k / n)).collect() }
    }

    pub fn add_scaled(&self, fp: PrimeField, c: u64, rhs: &FpMatrix) -> FpMatrix {
        FpMatrix { n: self.n, a: self.a.iter().zip(&rhs.a).map(|(&x, &y)| fp.add(x, fp.mul(c, y))).collect() }
    }

    pub fn is_identity_multiple(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| if i == j { self.get(i, i) == self.get(0, 0) } else { self.get(i, j) == 0 }))
    }

    /// Coefficients of `det(tI - M)`, lowest degree first.
    pub fn charpoly(&self, fp: PrimeField) -> Vec<u64> {
        let n = self.n;
        let mut c = vec![0; n + 1];
        c[n] = 1;
        let mut m = FpMatrix::zero(n);
        for k in 1..=n {
            let mut next = self.mul(fp, &m);
            for d in 0..n {
                next.a[d * n + d] = fp.add(next.a[d * n + d], c[n + 1 - k]);
            }
            m = next;
            let am = self.mul(fp, &m);
            let tr = (0..n).fold(0, |acc, d| fp.add(acc, am.get(d, d)));
            let kinv = fp.inv(k as u64 % fp.modulus()).expect("k < p");
            c[n - k] = fp.neg(fp.mul(tr, kinv));
        }
        c
    }

    /// Kernel of `M - mu I` as a list of basis vectors.
    pub fn eigenspace(&self, fp: PrimeField, mu: u64) -> Vec<Vec<u64>> {
        let shifted = self.add_scaled(fp, fp.neg(mu), &FpMatrix::identity(self.n));
        nullspace(fp, &rows_of(&shifted), self.n)
    }
}

pub fn rows_of(m: &FpMatrix) -> Vec<Vec<u64>> {
    m.a.chunks(m.n).map(|r| r.to_vec()).collect()
}

pub fn bilinear(fp: PrimeField, g: &FpMatrix, u: &[u64], v: &[u64]) -> u64 {
    let gv = g.mul_vec(fp, v);
    u.iter().zip(&gv).fold(0, |acc, (&a, &b)| fp.add(acc, fp.mul(a, b)))
}

/// Reduced row echelon basis of a subspace of `F_p^n`.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, fp: PrimeField, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let f = v[*p];
            if f != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = fp.sub(*a, fp.mul(f, b));
                }
            }
        }
        v
    }

    pub fn contains(&self, fp: PrimeField, v: &[u64]) -> bool {
        self.reduce(fp, v).iter().all(|&x| x == 0)
    }

    pub fn insert(&mut self, fp: PrimeField, v: &[u64]) -> bool {
        let r = self.reduce(fp, v);
        let Some(p) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = fp.inv(r[p]).expect("nonzero pivot");
        let r: Vec<u64> = r.iter().map(|&x| fp.mul(x, inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            let f = row[p];
            if f != 0 {
                for (a, &b) in row.iter_mut().zip(&r) {
                    *a = fp.sub(*a, fp.mul(f, b));
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Solutions `c` of `sum_j rows[i][j] c_j = 0` for every `i`.
pub fn nullspace(fp: PrimeField, rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(fp, r);
    }
    let pivots: Vec<usize> = e.rows.iter().map(|(p, _)| *p).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (p, row) in &e.rows {
                v[*p] = fp.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Smallest subspace containing the seeds and stable under the generators.
pub fn spin(fp: PrimeField, seeds: &[Vec<u64>], gens: &[FpMatrix]) -> Echelon {
    let mut space = Echelon::new();
    let mut queue: Vec<Vec<u64>> = seeds.to_vec();
    while let Some(v) = queue.pop() {
        if !space.insert(fp, &v) {
            continue;
        }
        for g in gens {
            queue.push(g.mul_vec(fp, &v));
        }
    }
    space
}

/// `W cap W^perp` for `W = span(basis)`.
pub fn radical(fp: PrimeField, g: &FpMatrix, basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let d = basis.len();
    // c in the radical iff sum_i c_i b(w_i, w_j) = 0 for every j
    let rows: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| bilinear(fp, g, &basis[i], &basis[j])).collect()).collect();
    nullspace(fp, &rows, d)
        .into_iter()
        .map(|c| {
            let n = basis[0].len();
            (0..n).map(|k| (0..d).fold(0, |acc, i| fp.add(acc, fp.mul(c[i], basis[i][k])))).collect()
        })
        .collect()
}

pub fn is_totally_isotropic(fp: PrimeField, g: &FpMatrix, basis: &[Vec<u64>]) -> bool {
    basis.iter().all(|u| basis.iter().all(|w| bilinear(fp, g, u, w) == 0))
}

pub fn is_invariant(fp: PrimeField, basis: &[Vec<u64>], gens: &[FpMatrix]) -> bool {
    let mut e = Echelon::new();
    for v in basis {
        e.insert(fp, v);
    }
    gens.iter().all(|g| basis.iter().all(|v| e.contains(fp, &g.mul_vec(fp, v))))
}

/// Univariate polynomials over `F_p`, coefficients lowest degree first.
pub mod upoly {
    use rand::Rng;

    use crate::field::PrimeField;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u64]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn divmod(fp: PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = degree(b).expect("division by zero polynomial");
        let lead = fp.inv(b[db]).expect("nonzero lead");
        let mut r = trim(a.to_vec());
        let mut q = vec![0; r.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let f = fp.mul(r[dr], lead);
            q[dr - db] = f;
            for (k, &c) in b[..=db].iter().enumerate() {
                r[dr - db + k] = fp.sub(r[dr - db + k], fp.mul(f, c));
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn monic(fp: PrimeField, a: &[u64]) -> Vec<u64> {
        let a = trim(a.to_vec());
        match a.last() {
            Some(&l) => {
                let inv = fp.inv(l).expect("nonzero lead");
                a.iter().map(|&c| fp.mul(c, inv)).collect()
            }
            None => a,
        }
    }

    pub fn gcd(fp: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = divmod(fp, &a, &b).1;
            a = b;
            b = r;
        }
        monic(fp, &a)
    }

    fn mulmod(fp: PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = fp.add(out[i + j], fp.mul(x, y));
            }
        }
        divmod(fp, &out, m).1
    }

    pub fn powmod(fp: PrimeField, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut acc = divmod(fp, &[1], m).1;
        let mut b = divmod(fp, base, m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(fp, &acc, &b, m);
            }
            b = mulmod(fp, &b, &b, m);
            e >>= 1;
        }
        acc
    }

    fn sub(fp: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let at = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0);
        trim((0..n).map(|k| fp.sub(at(a, k), at(b, k))).collect())
    }

    /// Distinct roots in `F_p`, sorted; Cantor-Zassenhaus splitting.
    pub fn roots<R: Rng + ?Sized>(fp: PrimeField, f: &[u64], rng: &mut R) -> Vec<u64> {
        let f = monic(fp, f);
        if degree(&f).unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = fp.modulus();
        let xp = powmod(fp, &[0, 1], p, &f);
        let g = gcd(fp, &f, &sub(fp, &xp, &[0, 1]));
        let mut out = Vec::new();
        split(fp, g, rng, &mut out);
        out.sort_unstable();
        out
    }

    fn split<R: Rng + ?Sized>(fp: PrimeField, g: Vec<u64>, rng: &mut R, out: &mut Vec<u64>) {
        match degree(&g) {
            None | Some(0) => {}
            Some(1) => out.push(fp.neg(g[0])),
            Some(d) => loop {
                let a = rng.gen_range(0..fp.modulus());
                let h = powmod(fp, &[a, 1], (fp.modulus() - 1) / 2, &g);
                let h = gcd(fp, &g, &sub(fp, &h, &[1]));
                let dh = degree(&h).unwrap_or(0);
                if dh > 0 && dh < d {
                    let q = divmod(fp, &g, &h).0;
                    split(fp, h, rng, out);
                    split(fp, monic(fp, &q), rng, out);
                    return;
                }
            },
        }
    }
}
