//! Parabolic data: `epsilon`, existence, and the period and index of the
//! canonical gerbe.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::construct::Group;

/// A rational weight in `[0, 1)`, written `p/q` in JSON.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub BigRational);

impl Weight {
    pub fn new(num: i64, den: i64) -> Self {
        Weight(BigRational::new(num.into(), den.into()))
    }

    /// `1 - w`, with `0` paired to itself.
    pub fn complement(&self) -> Weight {
        if self.0.is_zero() {
            self.clone()
        } else {
            Weight(BigRational::one() - &self.0)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let r: BigRational = match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
                let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
                if q.is_zero() {
                    return Err(format!("zero denominator in '{s}'"));
                }
                BigRational::new(p, q)
            }
            None => BigRational::from_integer(s.parse().map_err(|_| format!("bad weight '{s}'"))?),
        };
        Ok(Weight(r))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicPoint {
    pub weights: Vec<Weight>,
    pub multiplicities: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicDatum {
    pub group: Group,
    pub rank: u64,
    pub degree: i64,
    #[serde(default)]
    pub points: Vec<ParabolicPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuliError {
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error("no regularly stable bundles for this datum: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Nonexistent(Vec<Violation>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Violation {
    NonzeroParabolicDegree { value: String },
    MissingComplement { point: usize, weight: String },
    MultiplicityMismatch { point: usize, weight: String, multiplicity: u64, complement_multiplicity: u64 },
    OddRank { rank: u64 },
    /// Orthogonal groups are taken with rank `2n`, `n >= 2`.
    OrthogonalRankTooSmall { rank: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroParabolicDegree { value } => write!(f, "parabolic degree is {value}, not 0"),
            Violation::MissingComplement { point, weight } => write!(f, "point {point}: weight {weight} has no complement"),
            Violation::MultiplicityMismatch { point, weight, multiplicity, complement_multiplicity } => write!(
                f,
                "point {point}: weight {weight} has multiplicity {multiplicity} but its complement has {complement_multiplicity}"
            ),
            Violation::OddRank { rank } => write!(f, "rank {rank} is odd"),
            Violation::OrthogonalRankTooSmall { rank } => write!(f, "orthogonal rank {rank} is below 4"),
        }
    }
}

impl ParabolicDatum {
    pub fn new(group: Group, rank: u64, degree: i64, points: Vec<ParabolicPoint>) -> Result<Self, ModuliError> {
        let d = ParabolicDatum { group, rank, degree, points };
        d.validate()?;
        Ok(d)
    }

    /// Shape checks: weights in `[0, 1)` strictly increasing, positive
    /// multiplicities summing to the rank at every point.
    pub fn validate(&self) -> Result<(), ModuliError> {
        if self.rank == 0 {
            return Err(ModuliError::Malformed("rank must be positive".into()));
        }
        for (j, p) in self.points.iter().enumerate() {
            if p.weights.len() != p.multiplicities.len() || p.weights.is_empty() {
                return Err(ModuliError::Malformed(format!("point {j}: need one multiplicity per weight")));
            }
            if p.weights.iter().any(|w| w.0.is_negative() || w.0 >= BigRational::one()) {
                return Err(ModuliError::Malformed(format!("point {j}: weights must lie in [0, 1)")));
            }
            if p.weights.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ModuliError::Malformed(format!("point {j}: weights must be strictly increasing")));
            }
            if p.multiplicities.contains(&0) {
                return Err(ModuliError::Malformed(format!("point {j}: multiplicities must be positive")));
            }
            if p.multiplicities.iter().sum::<u64>() != self.rank {
                return Err(ModuliError::Malformed(format!("point {j}: multiplicities must sum to the rank {}", self.rank)));
            }
        }
        Ok(())
    }

    /// `d + sum_j sum_i pi_{j,i} n_{j,i}`.
    pub fn parabolic_degree(&self) -> BigRational {
        let mut total = BigRational::from_integer(self.degree.into());
        for p in &self.points {
            for (w, &m) in p.weights.iter().zip(&p.multiplicities) {
                total += &w.0 * BigRational::from_integer(m.into());
            }
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonDecomposition {
    pub epsilon: u64,
    pub alpha: u32,
    pub s: u64,
    /// `epsilon / 2` when `epsilon` is even.
    pub m: Option<u64>,
}

impl EpsilonDecomposition {
    pub fn of(epsilon: u64) -> Self {
        assert!(epsilon > 0, "epsilon is positive");
        let alpha = epsilon.trailing_zeros();
        EpsilonDecomposition { epsilon, alpha, s: epsilon >> alpha, m: epsilon.is_multiple_of(2).then_some(epsilon / 2) }
    }
}

/// `gcd(|d|, rank, all multiplicities)`.
pub fn epsilon(d: &ParabolicDatum) -> EpsilonDecomposition {
    let e = d.points.iter().flat_map(|p| p.multiplicities.iter().copied()).fold(d.degree.unsigned_abs().gcd(&d.rank), |a, m| a.gcd(&m));
    EpsilonDecomposition::of(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub exists: bool,
    pub violations: Vec<Violation>,
}

pub fn existence_check(d: &ParabolicDatum) -> ExistenceReport {
    let mut violations = Vec::new();
    let pd = d.parabolic_degree();
    if !pd.is_zero() {
        violations.push(Violation::NonzeroParabolicDegree { value: pd.to_string() });
    }
    for (j, p) in d.points.iter().enumerate() {
        for (w, &m) in p.weights.iter().zip(&p.multiplicities) {
            let c = w.complement();
            match p.weights.iter().position(|v| *v == c) {
                None => violations.push(Violation::MissingComplement { point: j, weight: w.to_string() }),
                Some(k) if p.multiplicities[k] != m && *w < c => violations.push(Violation::MultiplicityMismatch {
                    point: j,
                    weight: w.to_string(),
                    multiplicity: m,
                    complement_multiplicity: p.multiplicities[k],
                }),
                Some(_) => {}
            }
        }
    }
    if d.rank % 2 == 1 {
        violations.push(Violation::OddRank { rank: d.rank });
    }
    if d.group == Group::So && d.rank < 4 {
        violations.push(Violation::OrthogonalRankTooSmall { rank: d.rank });
    }
    ExistenceReport { exists: violations.is_empty(), violations }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period {
    Determined(u64),
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Exact(u64),
    /// One of the listed values; which one is not known.
    Candidates(Vec<u64>),
    Undetermined,
}

impl Index {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Index::Exact(v) => vec![*v],
            Index::Candidates(v) => v.clone(),
            Index::Undetermined => Vec::new(),
        }
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Period::Determined(v) => s.serialize_u64(*v),
            Period::Undetermined => s.serialize_str("Undetermined"),
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Index::Exact(v) => s.serialize_u64(*v),
            Index::Candidates(v) => v.serialize(s),
            Index::Undetermined => s.serialize_str("Undetermined"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    One(u64),
    Many(Vec<u64>),
    Text(String),
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawValue::deserialize(d)? {
            RawValue::One(v) => Ok(Period::Determined(v)),
            RawValue::Text(t) if t == "Undetermined" => Ok(Period::Undetermined),
            _ => Err(serde::de::Error::custom("period is a number or \"Undetermined\"")),
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawValue::deserialize(d)? {
            RawValue::One(v) => Ok(Index::Exact(v)),
            RawValue::Many(v) => Ok(Index::Candidates(v)),
            RawValue::Text(t) if t == "Undetermined" => Ok(Index::Undetermined),
            _ => Err(serde::de::Error::custom("index is a number, a list, or \"Undetermined\"")),
        }
    }
}

/// Which rule of the case table fixed a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    /// `epsilon` odd: a Poincaré bundle exists.
    OddEpsilon,
    /// Symplectic, `epsilon` even: no Poincaré bundle, explicit division algebra of index `2^alpha`.
    SymplecticEven,
    /// Orthogonal with odd part `s > 1`.
    OrthogonalOddPart,
    /// Orthogonal, `epsilon = 2^alpha` with `alpha >= 2`.
    OrthogonalPowerOfTwo,
    /// Orthogonal of rank `4n` with `epsilon = 2`.
    OrthogonalRank4nEpsilon2,
    /// Orthogonal of rank not divisible by 4 with `epsilon = 2`: not covered.
    OrthogonalEpsilon2Open,
}

fn require_existing(d: &ParabolicDatum) -> Result<EpsilonDecomposition, ModuliError> {
    d.validate()?;
    let e = existence_check(d);
    if !e.exists {
        return Err(ModuliError::Nonexistent(e.violations));
    }
    Ok(epsilon(d))
}

fn period_of(group: Group, rank: u64, e: EpsilonDecomposition) -> (Period, Justification) {
    match group {
        _ if e.epsilon % 2 == 1 => (Period::Determined(1), Justification::OddEpsilon),
        Group::Sp => (Period::Determined(2), Justification::SymplecticEven),
        Group::So if e.s > 1 => (Period::Determined(2), Justification::OrthogonalOddPart),
        Group::So if e.epsilon >= 4 => (Period::Determined(2), Justification::OrthogonalPowerOfTwo),
        Group::So if rank.is_multiple_of(4) => (Period::Determined(2), Justification::OrthogonalRank4nEpsilon2),
        Group::So => (Period::Undetermined, Justification::OrthogonalEpsilon2Open),
    }
}

fn index_of(group: Group, rank: u64, e: EpsilonDecomposition) -> (Index, Justification) {
    let full = 1u64 << e.alpha;
    match group {
        _ if e.epsilon % 2 == 1 => (Index::Exact(1), Justification::OddEpsilon),
        Group::Sp => (Index::Exact(full), Justification::SymplecticEven),
        Group::So if e.s > 1 => (Index::Exact(full), Justification::OrthogonalOddPart),
        Group::So if e.alpha >= 2 => (Index::Candidates(vec![full / 2, full]), Justification::OrthogonalPowerOfTwo),
        Group::So if rank.is_multiple_of(4) => (Index::Exact(2), Justification::OrthogonalRank4nEpsilon2),
        Group::So => (Index::Undetermined, Justification::OrthogonalEpsilon2Open),
    }
}

pub fn period(d: &ParabolicDatum) -> Result<Period, ModuliError> {
    Ok(period_of(d.group, d.rank, require_existing(d)?).0)
}

pub fn index(d: &ParabolicDatum) -> Result<Index, ModuliError> {
    Ok(index_of(d.group, d.rank, require_existing(d)?).0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodIndexReport {
    pub group: Group,
    pub rank: u64,
    pub epsilon: EpsilonDecomposition,
    pub period: Period,
    pub period_reason: Justification,
    pub index: Index,
    pub index_reason: Justification,
}

pub fn period_index(d: &ParabolicDatum) -> Result<PeriodIndexReport, ModuliError> {
    let e = require_existing(d)?;
    let (period, period_reason) = period_of(d.group, d.rank, e);
    let (index, index_reason) = index_of(d.group, d.rank, e);
    Ok(PeriodIndexReport { group: d.group, rank: d.rank, epsilon: e, period, period_reason, index, index_reason })
}

fn prime_support(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PeriodIndexReport {
    pub fn is_determinate(&self) -> bool {
        self.period != Period::Undetermined && self.index != Index::Undetermined
    }

    /// Structural checks: every index value divides `epsilon`; a determined
    /// period divides each index value and has the same prime factors.
    pub fn consistency_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if EpsilonDecomposition::of(self.epsilon.epsilon) != self.epsilon {
            out.push("epsilon decomposition is inconsistent".to_string());
        }
        for i in self.index.values() {
            if !self.epsilon.epsilon.is_multiple_of(i) {
                out.push(format!("index {i} does not divide epsilon {}", self.epsilon.epsilon));
            }
            if let Period::Determined(p) = self.period {
                if i % p != 0 {
                    out.push(format!("period {p} does not divide index {i}"));
                }
                if prime_support(p) != prime_support(i) {
                    out.push(format!("period {p} and index {i} have different prime factors"));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(ws: &[(i64, i64)], ms: &[u64]) -> ParabolicPoint {
        ParabolicPoint { weights: ws.iter().map(|&(p, q)| Weight::new(p, q)).collect(), multiplicities: ms.to_vec() }
    }

    fn datum(group: Group, rank: u64, degree: i64, points: Vec<ParabolicPoint>) -> ParabolicDatum {
        ParabolicDatum::new(group, rank, degree, points).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        let e = epsilon(&datum(Group::Sp, 4, 6, vec![point(&[(0, 1), (1, 2)], &[2, 2])]));
        assert_eq!((e.epsilon, e.alpha, e.s, e.m), (2, 1, 1, Some(1)));
        let e = epsilon(&datum(Group::Sp, 12, 0, vec![]));
        assert_eq!((e.epsilon, e.alpha, e.s), (12, 2, 3));
        let e = epsilon(&datum(Group::Sp, 4, 3, vec![point(&[(0, 1), (1, 2)], &[1, 3])]));
        assert_eq!((e.epsilon, e.m), (1, None));
    }

    #[test]
    fn existence_examples() {
        assert!(existence_check(&datum(Group::Sp, 2, -1, vec![point(&[(1, 2)], &[2])])).exists);
        let r = existence_check(&datum(Group::Sp, 2, 0, vec![point(&[(1, 3)], &[2])]));
        assert!(!r.exists);
        assert!(r.violations.contains(&Violation::MissingComplement { point: 0, weight: "1/3".into() }));
        assert!(existence_check(&datum(Group::Sp, 2, 0, vec![])).exists);
    }

    #[test]
    fn multiplicity_mismatch_reported_once() {
        let r = existence_check(&datum(Group::Sp, 4, -2, vec![point(&[(1, 3), (2, 3)], &[1, 3])]));
        let mismatches = r.violations.iter().filter(|v| matches!(v, Violation::MultiplicityMismatch { .. })).count();
        assert_eq!(mismatches, 1);
    }

    #[test]
    fn malformed_rejected() {
        assert!(ParabolicDatum::new(Group::Sp, 4, 0, vec![point(&[(1, 2), (1, 3)], &[2, 2])]).is_err());
        assert!(ParabolicDatum::new(Group::Sp, 4, 0, vec![point(&[(1, 2)], &[3])]).is_err());
        assert!(ParabolicDatum::new(Group::Sp, 4, 0, vec![point(&[(1, 1)], &[4])]).is_err());
    }

    #[test]
    fn table_examples() {
        let r = period_index(&datum(Group::Sp, 12, 0, vec![])).unwrap();
        assert_eq!((r.period, r.index.clone()), (Period::Determined(2), Index::Exact(4)));
        let r = period_index(&datum(Group::So, 8, 0, vec![])).unwrap();
        assert_eq!(r.index, Index::Candidates(vec![4, 8]));
        let half = |a: u64, b: u64| vec![point(&[(0, 1), (1, 2)], &[a, b])];
        let r = period_index(&datum(Group::So, 8, -2, half(4, 4))).unwrap();
        assert_eq!((r.period, r.index.clone()), (Period::Determined(2), Index::Exact(2)));
        let r = period_index(&datum(Group::So, 6, -2, half(2, 4))).unwrap();
        assert_eq!((r.period, r.index.clone()), (Period::Undetermined, Index::Undetermined));
        let r = period_index(&datum(Group::So, 6, 0, vec![])).unwrap();
        assert_eq!((r.period, r.index.clone()), (Period::Determined(2), Index::Exact(2)));
        let r = period_index(&datum(Group::Sp, 6, -1, vec![point(&[(0, 1), (1, 3), (2, 3)], &[4, 1, 1])])).unwrap();
        assert_eq!((r.period, r.index.clone()), (Period::Determined(1), Index::Exact(1)));
        assert!(r.consistency_problems().is_empty());
    }

    #[test]
    fn nonexistent_rejected() {
        let d = datum(Group::Sp, 2, 0, vec![point(&[(1, 3)], &[2])]);
        assert!(matches!(period(&d), Err(ModuliError::Nonexistent(_))));
        assert!(matches!(index(&d), Err(ModuliError::Nonexistent(_))));
    }

    #[test]
    fn json_shape() {
        let json = r#"{"group":"so","rank":8,"degree":-2,"points":[{"weights":["0","1/2"],"multiplicities":[4,4]}]}"#;
        let d: ParabolicDatum = serde_json::from_str(json).unwrap();
        assert_eq!(d.parabolic_degree(), BigRational::zero());
        let r = period_index(&d).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["index"], serde_json::json!(2));
        assert_eq!(v["period"], serde_json::json!(2));
        let back: PeriodIndexReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let r = period_index(&datum(Group::So, 8, 0, vec![])).unwrap();
        assert_eq!(serde_json::to_value(&r).unwrap()["index"], serde_json::json!([4, 8]));
    }
}
