//! The explicit skew tuples `(lambda_1 = A, lambda_2 = ... = lambda_g = B)`
//! in `M_eps(K)` with an involution, one family per case.
//!
//! The basis of `K^eps` is the Kronecker basis `e_{i_1} (x) ... (x) e_{i_q} (x) f_m`
//! with the quaternion factors first, so the index of `(i_1, ..., i_q, m)`
//! (all 0-based) is `((i_1 * 2 + i_2) * 2 + ...) * size + m`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::quaternion::{delta_gram, kron_all, kron_grams, quaternion_split, sigma_gram, tau_gram};
use crate::algebra::{classify_involution, AlgebraError, GramMatrix, InvolutionKind, InvolutionSpec, SqMatrix};
use crate::field::TowerElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    #[serde(alias = "Sp", alias = "SP")]
    Sp,
    #[serde(alias = "So", alias = "SO")]
    So,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Sp => "sp",
            Group::So => "so",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self, ConstructionError> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(Group::Sp),
            "so" => Ok(Group::So),
            _ => Err(ConstructionError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// Symplectic, `alpha` odd.
    SpOdd,
    /// Symplectic, `alpha` even.
    SpEven,
    /// Orthogonal, `alpha` odd, `s != 1`.
    SoOdd,
    /// Orthogonal, `alpha` even, `s != 1`.
    SoEven,
    /// Orthogonal, `s = 1`: the last quaternion factor is replaced by `M_2(F)`.
    RemSo,
    /// A tuple supplied by the caller.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("unknown group '{0}' (expected sp or so)")]
    UnknownGroup(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub group: Group,
    pub alpha: u32,
    pub s: u32,
    pub g: u32,
}

impl ConstructionParams {
    pub fn new(group: Group, alpha: u32, s: u32, g: u32) -> Result<Self, ConstructionError> {
        let p = ConstructionParams { group, alpha, s, g };
        p.case()?;
        Ok(p)
    }

    /// Validates the parameters and selects the case.
    pub fn case(&self) -> Result<CaseTag, ConstructionError> {
        let bad = |m: &str| Err(ConstructionError::InvalidCase(m.to_string()));
        if self.s == 0 || self.s.is_multiple_of(2) {
            return bad("s must be an odd positive integer");
        }
        if self.g < 2 {
            return bad("g must be at least 2");
        }
        if self.alpha == 0 {
            return bad(&format!("{} requires alpha >= 1", self.group));
        }
        if self.alpha > 6 {
            return bad("alpha above 6 is not supported");
        }
        if self.epsilon() > 64 {
            return bad("dimension 2^alpha * s above 64 is not supported");
        }
        Ok(match (self.group, self.alpha % 2 == 1, self.s == 1) {
            (Group::Sp, true, _) => CaseTag::SpOdd,
            (Group::Sp, false, _) => CaseTag::SpEven,
            (Group::So, _, true) => CaseTag::RemSo,
            (Group::So, true, false) => CaseTag::SoOdd,
            (Group::So, false, false) => CaseTag::SoEven,
        })
    }

    pub fn epsilon(&self) -> usize {
        (1usize << self.alpha) * self.s as usize
    }
}

/// Shape of the Kronecker basis: `quaternion_count` 2x2 factors followed by
/// one `matrix_size` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KroneckerLayout {
    pub quaternion_count: u32,
    pub matrix_size: usize,
}

impl KroneckerLayout {
    pub fn dim(&self) -> usize {
        (1usize << self.quaternion_count) * self.matrix_size
    }

    /// `(i_1, ..., i_q)` (0-based) and `m` (0-based) of a basis index.
    pub fn decode(&self, index: usize) -> (Vec<u8>, usize) {
        let m = index % self.matrix_size;
        let mut rest = index / self.matrix_size;
        let q = self.quaternion_count as usize;
        let mut bits = vec![0u8; q];
        for k in (0..q).rev() {
            bits[k] = (rest % 2) as u8;
            rest /= 2;
        }
        (bits, m)
    }

    pub fn encode(&self, bits: &[u8], m: usize) -> usize {
        bits.iter().fold(0usize, |acc, &b| acc * 2 + b as usize) * self.matrix_size + m
    }
}

/// The auxiliary `s x s` matrices of the orthogonal families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxMatrices {
    /// Ones in the first row and column, zero elsewhere.
    pub m1: SqMatrix,
    /// First row ones except a zero corner, first column `-1` below it.
    pub m2: SqMatrix,
}

pub fn aux_matrices(s: usize) -> AuxMatrices {
    let mut m1 = SqMatrix::zero(s);
    let mut m2 = SqMatrix::zero(s);
    m1.set(0, 0, TowerElement::one());
    for k in 1..s {
        m1.set(0, k, TowerElement::one());
        m1.set(k, 0, TowerElement::one());
        m2.set(0, k, TowerElement::one());
        m2.set(k, 0, TowerElement::from_int(-1));
    }
    AuxMatrices { m1, m2 }
}

/// `diag(1, 2, ..., s)`.
pub fn multiplier_diag(s: usize) -> SqMatrix {
    SqMatrix::diag((1..=s as i64).map(TowerElement::from_int).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableTupleCandidate {
    pub case: CaseTag,
    pub params: Option<ConstructionParams>,
    pub layout: Option<KroneckerLayout>,
    pub gram: GramMatrix,
    pub kind: InvolutionKind,
    pub elements: Vec<SqMatrix>,
}

impl StableTupleCandidate {
    /// A caller-supplied tuple; all elements must match the Gram dimension.
    pub fn custom(gram: GramMatrix, elements: Vec<SqMatrix>) -> Result<Self, ConstructionError> {
        if elements.is_empty() {
            return Err(ConstructionError::InvalidCase("a tuple needs at least one element".into()));
        }
        for m in &elements {
            gram.matrix().check_dim(m.dim())?;
        }
        let kind = classify_involution(&gram);
        Ok(StableTupleCandidate { case: CaseTag::Custom, params: None, layout: None, gram, kind, elements })
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn involution(&self) -> InvolutionSpec {
        InvolutionSpec::new(self.gram.clone())
    }

    /// `lambda_1`.
    pub fn a(&self) -> &SqMatrix {
        &self.elements[0]
    }

    /// `lambda_2`, or `lambda_1` for a one-element tuple.
    pub fn b(&self) -> &SqMatrix {
        self.elements.get(1).unwrap_or(&self.elements[0])
    }
}

fn tensor_with(quaternion: &[SqMatrix], last: &SqMatrix) -> SqMatrix {
    let mut factors = quaternion.to_vec();
    factors.push(last.clone());
    kron_all(&factors)
}

fn ones_of_size(factors: &[GramMatrix], size: usize) -> GramMatrix {
    let mut all = factors.to_vec();
    all.push(GramMatrix::identity(size));
    kron_grams(&all)
}

/// Orthogonal family on `q` quaternion factors and a matrix factor of size
/// `size`; `q` odd uses `Delta` on every factor, `q` even keeps the last
/// quaternion factor under the transpose.
fn orthogonal_family(q: u32, size: usize) -> (GramMatrix, SqMatrix, SqMatrix) {
    let qs: Vec<_> = (1..=q as u16).map(quaternion_split).collect();
    let mi: Vec<SqMatrix> = qs.iter().map(|g| g.mi.clone()).collect();
    let aux = aux_matrices(size);
    let a = tensor_with(&mi, &multiplier_diag(size));
    if q % 2 == 1 {
        let mj: Vec<SqMatrix> = qs.iter().map(|g| g.mj.clone()).collect();
        let gram = ones_of_size(&vec![delta_gram(); q as usize], size);
        let b = &tensor_with(&mi, &aux.m1) + &tensor_with(&mj, &aux.m2);
        (gram, a, b)
    } else {
        let mut mj: Vec<SqMatrix> = qs[..q as usize - 1].iter().map(|g| g.mj.clone()).collect();
        mj.push(SqMatrix::identity(2));
        let mut grams = vec![delta_gram(); q as usize - 1];
        grams.push(GramMatrix::identity(2));
        let gram = ones_of_size(&grams, size);
        let b = &tensor_with(&mi, &aux.m1) + &tensor_with(&mj, &aux.m2);
        (gram, a, b)
    }
}

pub fn build_tuple(p: &ConstructionParams) -> Result<StableTupleCandidate, ConstructionError> {
    let case = p.case()?;
    let alpha = p.alpha;
    let s = p.s as usize;
    let (gram, a, b, layout) = match case {
        CaseTag::SpOdd | CaseTag::SpEven => {
            let qs: Vec<_> = (1..=alpha as u16).map(quaternion_split).collect();
            let mi: Vec<SqMatrix> = qs.iter().map(|g| g.mi.clone()).collect();
            let a = tensor_with(&mi, &multiplier_diag(s));
            let mut grams = vec![sigma_gram(); alpha as usize];
            let mut mj: Vec<SqMatrix> = qs.iter().map(|g| g.mj.clone()).collect();
            if case == CaseTag::SpEven {
                grams[alpha as usize - 1] = tau_gram(alpha as u16);
                mj[alpha as usize - 1] = SqMatrix::identity(2);
            }
            let b = tensor_with(&mj, &SqMatrix::identity(s));
            (ones_of_size(&grams, s), a, b, KroneckerLayout { quaternion_count: alpha, matrix_size: s })
        }
        CaseTag::SoOdd | CaseTag::SoEven => {
            let (gram, a, b) = orthogonal_family(alpha, s);
            (gram, a, b, KroneckerLayout { quaternion_count: alpha, matrix_size: s })
        }
        CaseTag::RemSo => {
            let q = alpha - 1;
            let layout = KroneckerLayout { quaternion_count: q, matrix_size: 2 };
            if q == 0 {
                // M_2(F) with the transpose: skew matrices are multiples of J
                let j = SqMatrix::from_ints(&[&[0, 1], &[-1, 0]])?;
                (GramMatrix::identity(2), j.clone(), j, layout)
            } else {
                let (gram, a, b) = orthogonal_family(q, 2);
                (gram, a, b, layout)
            }
        }
        CaseTag::Custom => unreachable!("params never select the custom case"),
    };
    let mut elements = vec![a];
    elements.extend(std::iter::repeat_n(b, p.g as usize - 1));
    let kind = classify_involution(&gram);
    Ok(StableTupleCandidate { case, params: Some(*p), layout: Some(layout), gram, kind, elements })
}

/// A deliberately unstable tuple on `K^2 (+) K^2`: each element is a block
/// copy `m (+) m`, and the gram `Sigma^-1 (+) -Sigma^-1` makes the diagonal
/// copy `{(u, u)}` totally isotropic.
pub fn planted_block_tuple() -> StableTupleCandidate {
    let block = |m: &SqMatrix| {
        let mut out = SqMatrix::zero(4);
        for r in 0..2 {
            for c in 0..2 {
                out.set(r, c, m.get(r, c).clone());
                out.set(r + 2, c + 2, m.get(r, c).clone());
            }
        }
        out
    };
    let h = SqMatrix::from_ints(&[&[1, 0], &[0, -1]]).expect("2x2");
    let swap = SqMatrix::from_ints(&[&[0, 1], &[1, 0]]).expect("2x2");
    let s = sigma_gram().matrix().clone();
    let mut g = block(&s);
    for r in 2..4 {
        for c in 2..4 {
            let v = -g.get(r, c);
            g.set(r, c, v);
        }
    }
    let gram = GramMatrix::new(g).expect("nondegenerate");
    StableTupleCandidate::custom(gram, vec![block(&h), block(&swap)]).expect("dimensions agree")
}

/// Outcome of the skewness check; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewCheck {
    pub passed: bool,
    pub failing_index: Option<usize>,
}

/// Checks `sigma(lambda_i) = -lambda_i` exactly for every element.
pub fn verify_skew(t: &StableTupleCandidate) -> SkewCheck {
    let inv = t.involution();
    for (k, m) in t.elements.iter().enumerate() {
        let ok = inv.apply(m).is_ok_and(|img| img == -m);
        if !ok {
            return SkewCheck { passed: false, failing_index: Some(k + 1) };
        }
    }
    SkewCheck { passed: true, failing_index: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Var;

    fn build(group: Group, alpha: u32, s: u32) -> StableTupleCandidate {
        build_tuple(&ConstructionParams::new(group, alpha, s, 2).unwrap()).unwrap()
    }

    #[test]
    fn planted_block_is_skew() {
        let t = planted_block_tuple();
        assert!(verify_skew(&t).passed);
        assert_eq!(t.kind, InvolutionKind::Symplectic);
    }

    #[test]
    fn sp_alpha1_s1() {
        let t = build(Group::Sp, 1, 1);
        let q = quaternion_split(1);
        assert_eq!(t.a(), &q.mi);
        assert_eq!(t.b(), &q.mj);
        assert_eq!(t.gram, sigma_gram());
        assert_eq!(t.kind, InvolutionKind::Symplectic);
    }

    #[test]
    fn so_alpha1_s3_shape() {
        let t = build(Group::So, 1, 3);
        assert_eq!(t.dim(), 6);
        let q = quaternion_split(1);
        let aux = aux_matrices(3);
        assert_eq!(t.a(), &q.mi.kron(&multiplier_diag(3)));
        assert_eq!(t.b(), &(&q.mi.kron(&aux.m1) + &q.mj.kron(&aux.m2)));
        assert_eq!(t.gram, delta_gram().kron(&GramMatrix::identity(3)));
    }

    #[test]
    fn aux_symmetry() {
        let aux = aux_matrices(3);
        assert_eq!(aux.m1.transpose(), aux.m1);
        assert_eq!(aux.m2.transpose(), -&aux.m2);
        assert_eq!(aux.m1, SqMatrix::from_ints(&[&[1, 1, 1], &[1, 0, 0], &[1, 0, 0]]).unwrap());
        assert_eq!(aux.m2, SqMatrix::from_ints(&[&[0, 1, 1], &[-1, 0, 0], &[-1, 0, 0]]).unwrap());
    }

    #[test]
    fn rem_so_alpha1() {
        let t = build(Group::So, 1, 1);
        assert_eq!(t.case, CaseTag::RemSo);
        assert_eq!(t.gram, GramMatrix::identity(2));
        assert!(verify_skew(&t).passed);
    }

    #[test]
    fn skewness_and_kind_small_cases() {
        for group in [Group::Sp, Group::So] {
            for alpha in 1..=3 {
                for s in [1, 3] {
                    let t = build(group, alpha, s);
                    assert!(verify_skew(&t).passed, "{group} {alpha} {s}");
                    let want = if group == Group::Sp { InvolutionKind::Symplectic } else { InvolutionKind::Orthogonal };
                    assert_eq!(t.kind, want);
                    assert_eq!(t.dim(), t.layout.unwrap().dim());
                }
            }
        }
    }

    #[test]
    fn tampered_tuples_fail_at_index() {
        let mut t = build(Group::Sp, 1, 1);
        t.elements[0] = SqMatrix::identity(2);
        assert_eq!(verify_skew(&t), SkewCheck { passed: false, failing_index: Some(1) });
        let mut t = build(Group::So, 1, 3);
        t.elements[1] = t.gram.matrix().clone();
        assert_eq!(verify_skew(&t).failing_index, Some(2));
    }

    #[test]
    fn invalid_params() {
        assert!(ConstructionParams::new(Group::Sp, 0, 1, 2).is_err());
        assert!(ConstructionParams::new(Group::So, 0, 3, 2).is_err());
        assert!(ConstructionParams::new(Group::Sp, 1, 2, 2).is_err());
        assert!(ConstructionParams::new(Group::Sp, 1, 1, 1).is_err());
    }

    #[test]
    fn elements_repeat_b() {
        let t = build_tuple(&ConstructionParams::new(Group::So, 2, 3, 4).unwrap()).unwrap();
        assert_eq!(t.elements.len(), 4);
        assert!(t.elements[1..].iter().all(|m| m == t.b()));
        assert_ne!(t.a(), t.b());
    }

    #[test]
    fn layout_round_trip() {
        let l = KroneckerLayout { quaternion_count: 3, matrix_size: 3 };
        for k in 0..l.dim() {
            let (bits, m) = l.decode(k);
            assert_eq!(l.encode(&bits, m), k);
        }
        assert_eq!(l.decode(3 * 5 + 2), (vec![1, 0, 1], 2));
    }

    #[test]
    fn a_squared_is_scalar_times_diag() {
        let t = build(Group::Sp, 2, 3);
        let x = &TowerElement::var(Var::X(1)) * &TowerElement::var(Var::X(2));
        let sq: Vec<_> = (1..=3).map(|m| TowerElement::from_int(m * m)).collect();
        let expected = SqMatrix::identity(4).kron(&SqMatrix::diag(sq)).scale(&x);
        assert_eq!(t.a() * t.a(), expected);
    }
}
