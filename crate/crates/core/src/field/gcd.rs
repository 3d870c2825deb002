//! Multivariate gcd over `Q(i)` by recursive primitive remainder sequences.
//!
//! Results are monic in the graded-lex order, which makes them canonical.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::monomial::Var;
use super::poly::MultiPoly;
use super::specialize::{next_prime_1_mod_4, PrimeField};

/// Monic gcd of `a` and `b`. `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    gcd_stripped(&a1, &b1).mul_monomial(&mono).monic()
}

/// gcd of many polynomials, short-circuiting at 1.
pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for p in polys {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn gcd_stripped(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    if let Some(d) = single_term_gcd(a, b) {
        return d;
    }
    if certainly_coprime(a, b) {
        return MultiPoly::one();
    }
    let v = main_var(a, b);
    let (ca, pa) = content_and_primitive(a, v);
    let (cb, pb) = content_and_primitive(b, v);
    let c = gcd(&ca, &cb);
    if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        return c;
    }
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

// Monomial content was already removed, so a single-term input is a constant
// multiple of 1 and the gcd is trivial.
fn single_term_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    if a.num_terms() == 1 || b.num_terms() == 1 {
        Some(MultiPoly::one())
    } else {
        None
    }
}

fn modular_field() -> (PrimeField, u64) {
    static FIELD: OnceLock<(PrimeField, u64)> = OnceLock::new();
    *FIELD.get_or_init(|| {
        let fp = PrimeField::new(next_prime_1_mod_4(2_000_000_000)).expect("prime");
        (fp, fp.sqrt_minus_one().expect("p = 1 mod 4"))
    })
}

// Image of `p` in F_p[v] after sending every other variable to a value from
// `point`. Index k holds the coefficient of v^k.
fn univariate_image(p: &MultiPoly, v: Var, point: &dyn Fn(Var) -> u64) -> Option<Vec<u64>> {
    let (fp, i) = modular_field();
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = fp.scalar(c, i)?;
        let mut k = 0;
        for &(w, e) in m.powers() {
            if w == v {
                k = e as usize;
            } else {
                t = fp.mul(t, fp.pow(point(w), e as u64));
            }
        }
        out[k] = fp.add(out[k], t);
    }
    Some(out)
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let (fp, _) = modular_field();
    let trim = |p: &mut Vec<u64>| {
        while p.last() == Some(&0) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lc_inv = fp.inv(*b.last().expect("nonempty")).expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let q = fp.mul(*a.last().expect("nonempty"), lc_inv);
            let shift = a.len() - b.len();
            for (k, &bk) in b.iter().enumerate() {
                a[shift + k] = fp.sub(a[shift + k], fp.mul(q, bk));
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

// Sound coprimality test. For each shared variable v, an evaluation of the
// other variables that keeps both leading coefficients in v nonzero maps a
// common factor of positive v-degree to a common factor of the images, so
// trivial image gcds in every shared variable force a constant gcd. A `false`
// answer is inconclusive.
fn certainly_coprime(a: &MultiPoly, b: &MultiPoly) -> bool {
    let (fp, _) = modular_field();
    let shared: Vec<Var> = a.vars().intersection(&b.vars()).copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for v in shared {
        let values: std::collections::BTreeMap<Var, u64> = a
            .vars()
            .union(&b.vars())
            .map(|&w| (w, rng.gen_range(1..fp.modulus())))
            .collect();
        let point = |w: Var| values[&w];
        let (Some(ia), Some(ib)) = (univariate_image(a, v, &point), univariate_image(b, v, &point)) else {
            return false;
        };
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            return false;
        }
        if univariate_gcd_degree(ia, ib) > 0 {
            return false;
        }
    }
    true
}

fn main_var(a: &MultiPoly, b: &MultiPoly) -> Var {
    let va = a.vars();
    let vb = b.vars();
    // prefer a variable common to both, lowest degree keeps PRS short
    let common: Vec<Var> = va.intersection(&vb).copied().collect();
    let pool: Vec<Var> = if common.is_empty() { va.union(&vb).copied().collect() } else { common };
    *pool
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomial has a variable")
}

/// Splits `p` into its content (gcd of coefficients in `v`) and primitive part.
pub fn content_and_primitive(p: &MultiPoly, v: Var) -> (MultiPoly, MultiPoly) {
    let coeffs = p.coeffs_in(v);
    let content = gcd_all(coeffs.values());
    let prim = p.div_exact(&content).expect("content divides polynomial");
    (content, prim)
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: Var) -> MultiPoly {
    let (mut r0, mut r1) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = r0.pseudo_rem(&r1, v);
        if r.is_zero() {
            return content_and_primitive(&r1, v).1.monic();
        }
        if r.degree_in(v) == 0 {
            return MultiPoly::one();
        }
        r0 = r1;
        r1 = content_and_primitive(&r, v).1;
    }
}
