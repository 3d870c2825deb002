//! Request dispatch, reports and offline certificate checking for the
//! `stablecsa` binary.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use stablecsa::algebra::{GramMatrix, SqMatrix};
use stablecsa::construct::{build_tuple, planted_block_tuple, verify_skew, CaseTag, ConstructionParams, Group, SkewCheck, StableTupleCandidate};
use stablecsa::field::{parse_element, DEFAULT_PRIME};
use stablecsa::moduli::{epsilon, existence_check, period_index, EpsilonDecomposition, ExistenceReport, ModuliError, ParabolicDatum, PeriodIndexReport};
use stablecsa::pfister::{descent_certificate, quaternion_norm_check, verify_descent, DescentCertificate, IsotropyCandidate, NormFormReport, PfisterForm, VerifyError};
use stablecsa::stability::{OracleOptions, StabilityCertificate, Verdict};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate rejected at {0}")]
    Rejected(VerifyError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Malformed(_) | CliError::Rejected(_) => EXIT_CERTIFICATE,
            CliError::Internal(_) => 1,
        }
    }
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Epsilon,
    PeriodIndex,
    Construct,
    Certify,
    PfisterCheck,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Symbolic,
    Specialize,
    Both,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "specialize" | "specialized" => Ok(Mode::Specialize),
            "both" => Ok(Mode::Both),
            _ => Err(format!("unknown mode '{s}' (expected symbolic, specialize or both)")),
        }
    }
}

/// Which tuple `construct` and `certify` work on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum TupleSource {
    Params { group: Group, alpha: u32, s: u32, g: u32 },
    /// The block-diagonal example with an invariant isotropic plane.
    Planted,
    /// A JSON file `{ "gram": [[..]], "elements": [[[..]]] }` of expressions.
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandRequest {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<TupleSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub mode: Mode,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub prime: u64,
    /// Quaternion index for the norm-form check of `pfister-check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<u16>,
    /// Candidate entries given inline to `pfister-check`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
}

impl CommandRequest {
    pub fn new(command: Command) -> Self {
        CommandRequest { command, tuple: None, input: None, mode: Mode::Symbolic, trials: 5, seed: None, prime: DEFAULT_PRIME, norm: None, entries: Vec::new(), arity: None }
    }

    /// Range checks that do not need any input files.
    pub fn validate(&self) -> Result<(), CliError> {
        match self.command {
            Command::Epsilon | Command::PeriodIndex if self.input.is_none() => Err(input("a datum file is required (--file)")),
            Command::Construct | Command::Certify => {
                match &self.tuple {
                    None => return Err(input("no tuple given: pass --group/--alpha/--s/--g, --planted or --file")),
                    Some(TupleSource::Params { group, alpha, s, g }) => {
                        ConstructionParams::new(*group, *alpha, *s, *g).map_err(input)?;
                    }
                    Some(_) => {}
                }
                if self.command == Command::Certify && self.mode != Mode::Symbolic {
                    if self.seed.is_none() {
                        return Err(input("--seed is required for the specialize mode"));
                    }
                    if self.trials == 0 {
                        return Err(input("--trials must be positive"));
                    }
                    if self.prime % 4 != 1 || !is_prime(self.prime) {
                        return Err(input(format!("--prime {} is not a prime congruent to 1 mod 4", self.prime)));
                    }
                }
                Ok(())
            }
            Command::PfisterCheck => {
                let sources = [self.norm.is_some(), !self.entries.is_empty(), self.input.is_some()].iter().filter(|b| **b).count();
                if sources != 1 {
                    return Err(input("pfister-check takes exactly one of --norm, --entry or --file"));
                }
                if !self.entries.is_empty() && self.arity.is_none() {
                    return Err(input("--arity is required with --entry"));
                }
                if self.norm == Some(0) {
                    return Err(input("--norm indices start at 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn oracle_options(&self) -> OracleOptions {
        OracleOptions { trials: self.trials, seed: self.seed.unwrap_or(0), prime: self.prime, ..OracleOptions::default() }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSummary {
    pub case: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ConstructionParams>,
    pub kind: stablecsa::algebra::InvolutionKind,
    pub dim: usize,
    pub generators: usize,
    pub skew: SkewCheck,
}

impl TupleSummary {
    fn of(t: &StableTupleCandidate) -> Self {
        TupleSummary { case: t.case, params: t.params, kind: t.kind, dim: t.dim(), generators: t.elements.len(), skew: verify_skew(t) }
    }
}

/// Enough to rebuild the tuple a certificate speaks about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum TupleRecord {
    Params { params: ConstructionParams },
    Planted,
    Custom { gram: GramMatrix, elements: Vec<SqMatrix> },
}

impl TupleRecord {
    pub fn rebuild(&self) -> Result<StableTupleCandidate, CliError> {
        match self {
            TupleRecord::Params { params } => build_tuple(params).map_err(|e| CliError::Malformed(e.to_string())),
            TupleRecord::Planted => Ok(planted_block_tuple()),
            TupleRecord::Custom { gram, elements } => {
                StableTupleCandidate::custom(gram.clone(), elements.clone()).map_err(|e| CliError::Malformed(e.to_string()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ReportResult {
    Epsilon { datum: ParabolicDatum, epsilon: EpsilonDecomposition, existence: ExistenceReport },
    PeriodIndex { datum: ParabolicDatum, report: PeriodIndexReport },
    Construct { tuple: TupleRecord, summary: TupleSummary },
    Certify {
        tuple: TupleRecord,
        summary: TupleSummary,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbolic: Option<StabilityCertificate>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        specialized: Option<StabilityCertificate>,
    },
    Pfister { arity: usize, candidate: Vec<String>, certificate: DescentCertificate },
    NormForm { report: NormFormReport },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub request: CommandRequest,
    pub result: ReportResult,
    pub timing: Timing,
}

impl Report {
    /// Exit status: 2 when the answer is left open, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        let open = match &self.result {
            ReportResult::PeriodIndex { report, .. } => !report.is_determinate(),
            ReportResult::Construct { summary, .. } => !summary.skew.passed,
            ReportResult::Certify { symbolic, specialized, .. } => {
                [symbolic, specialized].into_iter().flatten().any(|c| c.verdict == Verdict::Inconclusive)
            }
            ReportResult::Epsilon { existence, .. } => !existence.exists,
            _ => false,
        };
        if open { EXIT_UNDETERMINED } else { EXIT_OK }
    }

    /// JSON with the timing field dropped, for determinism checks.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").remove("timing");
        v.to_string()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.result {
            ReportResult::Epsilon { epsilon: e, existence, .. } => {
                out += &format!("epsilon = {} = 2^{} * {}\n", e.epsilon, e.alpha, e.s);
                out += &format!("regularly stable bundles exist: {}\n", existence.exists);
                for v in &existence.violations {
                    out += &format!("  violated: {}\n", serde_json::to_string(v).unwrap_or_default());
                }
            }
            ReportResult::PeriodIndex { report, .. } => {
                out += &format!("group {} rank {} epsilon {}\n", report.group, report.rank, report.epsilon.epsilon);
                out += &format!("period: {} ({})\n", json_str(&report.period), json_str(&report.period_reason));
                out += &format!("index:  {} ({})\n", json_str(&report.index), json_str(&report.index_reason));
            }
            ReportResult::Construct { summary, .. } => out += &summary_text(summary),
            ReportResult::Certify { summary, symbolic, specialized, .. } => {
                out += &summary_text(summary);
                if let Some(c) = symbolic {
                    let n = c.symbolic.as_ref().map_or(0, |s| s.eigenspaces.len());
                    out += &format!("symbolic: {} ({n} eigenspaces)\n", c.verdict);
                }
                if let Some(c) = specialized {
                    let n = c.specialized.as_ref().map_or(0, |s| s.trials.len());
                    out += &format!("specialized: {} after {n} trial(s)\n", c.verdict);
                }
            }
            ReportResult::Pfister { arity, certificate, .. } => {
                out += &format!("{arity}-fold Pfister form value: {}\n", certificate.value);
                out += &format!("nonzero, descent certificate with {} step(s)\n", certificate.steps.len());
            }
            ReportResult::NormForm { report } => {
                let classes: Vec<String> = report.classes.iter().map(|c| c.class.to_string()).collect();
                out += &format!("norm form of quaternion {}: square classes {}\n", report.index, classes.join(", "));
                out += "anisotropic over the base field\n";
            }
        }
        out + &format!("({:.1} ms, stablecsa {})\n", self.timing.elapsed_ms, self.version)
    }
}

fn json_str<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default().trim_matches('"').to_string()
}

fn summary_text(s: &TupleSummary) -> String {
    let skew = if s.skew.passed { "passed".to_string() } else { format!("FAILED at generator {}", s.skew.failing_index.unwrap_or(0)) };
    format!("{} tuple, {:?} involution, dimension {}, {} generators, skew check {skew}\n", json_str(&s.case), s.kind, s.dim, s.generators)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_datum(path: &Path) -> Result<ParabolicDatum, CliError> {
    let d: ParabolicDatum = serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
    d.validate().map_err(input)?;
    Ok(d)
}

#[derive(Deserialize)]
struct TupleFile {
    gram: Vec<Vec<String>>,
    elements: Vec<Vec<Vec<String>>>,
}

fn parse_matrix(rows: &[Vec<String>], what: &str) -> Result<SqMatrix, CliError> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, s)| parse_element(s).map_err(|e| input(format!("{what} entry ({r},{c}): {e}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SqMatrix::from_rows(rows).map_err(|e| input(format!("{what}: {e}")))
}

fn load_tuple(source: &TupleSource) -> Result<(TupleRecord, StableTupleCandidate), CliError> {
    match source {
        TupleSource::Params { group, alpha, s, g } => {
            let params = ConstructionParams::new(*group, *alpha, *s, *g).map_err(input)?;
            let t = build_tuple(&params).map_err(input)?;
            Ok((TupleRecord::Params { params }, t))
        }
        TupleSource::Planted => Ok((TupleRecord::Planted, planted_block_tuple())),
        TupleSource::File { path } => {
            let f: TupleFile = serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
            let gram = GramMatrix::new(parse_matrix(&f.gram, "gram")?).map_err(input)?;
            let elements = f.elements.iter().enumerate().map(|(k, m)| parse_matrix(m, &format!("element {k}"))).collect::<Result<Vec<_>, _>>()?;
            let t = StableTupleCandidate::custom(gram.clone(), elements.clone()).map_err(input)?;
            Ok((TupleRecord::Custom { gram, elements }, t))
        }
    }
}

#[derive(Deserialize)]
struct CandidateFile {
    arity: usize,
    candidate: Vec<String>,
}

fn moduli_error(e: ModuliError) -> CliError {
    input(e)
}

pub fn run(req: &CommandRequest) -> Result<Report, CliError> {
    req.validate()?;
    let start = Instant::now();
    let result = match req.command {
        Command::Epsilon => {
            let datum = read_datum(req.input.as_deref().expect("validated"))?;
            ReportResult::Epsilon { epsilon: epsilon(&datum), existence: existence_check(&datum), datum }
        }
        Command::PeriodIndex => {
            let datum = read_datum(req.input.as_deref().expect("validated"))?;
            let report = period_index(&datum).map_err(moduli_error)?;
            ReportResult::PeriodIndex { datum, report }
        }
        Command::Construct => {
            let (tuple, t) = load_tuple(req.tuple.as_ref().expect("validated"))?;
            ReportResult::Construct { tuple, summary: TupleSummary::of(&t) }
        }
        Command::Certify => {
            let (tuple, t) = load_tuple(req.tuple.as_ref().expect("validated"))?;
            let internal = |e: stablecsa::stability::StabilityError| CliError::Internal(e.to_string());
            let symbolic = match req.mode {
                Mode::Symbolic | Mode::Both if t.case == CaseTag::Custom => {
                    return Err(input("symbolic certificates need a constructed tuple; use --mode specialize"));
                }
                Mode::Symbolic | Mode::Both => Some(StabilityCertificate::symbolic(&t).map_err(internal)?),
                Mode::Specialize => None,
            };
            let specialized = match req.mode {
                Mode::Specialize | Mode::Both => Some(StabilityCertificate::specialized(&t, req.oracle_options()).map_err(internal)?),
                Mode::Symbolic => None,
            };
            ReportResult::Certify { tuple, summary: TupleSummary::of(&t), symbolic, specialized }
        }
        Command::PfisterCheck => {
            if let Some(l) = req.norm {
                ReportResult::NormForm { report: quaternion_norm_check(l).map_err(input)? }
            } else {
                let (arity, entries) = match &req.input {
                    Some(path) => {
                        let f: CandidateFile = serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
                        (f.arity, f.candidate)
                    }
                    None => (req.arity.expect("validated"), req.entries.clone()),
                };
                let form = PfisterForm::new(arity).map_err(input)?;
                let cand = IsotropyCandidate::parse(&entries).map_err(input)?;
                let certificate = descent_certificate(&form, &cand).map_err(input)?;
                let candidate = cand.f.iter().map(|p| p.to_string()).collect();
                ReportResult::Pfister { arity, candidate, certificate }
            }
        }
    };
    Ok(Report { version: VERSION.to_string(), request: req.clone(), result, timing: Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 } })
}

fn rejected(e: VerifyError) -> CliError {
    CliError::Rejected(e)
}

/// Re-executes every certificate in a report. `Ok(())` means every step
/// checks out; a failing step is reported with its index.
pub fn verify_report(report: &Report) -> Result<(), CliError> {
    match &report.result {
        ReportResult::Epsilon { datum, epsilon: e, existence } => {
            if epsilon(datum) != *e || existence_check(datum) != *existence {
                return Err(rejected(VerifyError::at(0, "epsilon or existence report differs from the recomputation")));
            }
        }
        ReportResult::PeriodIndex { datum, report: r } => {
            let fresh = period_index(datum).map_err(|e| CliError::Malformed(e.to_string()))?;
            if fresh != *r {
                return Err(rejected(VerifyError::at(0, "period/index report differs from the recomputation")));
            }
            if let Some(p) = r.consistency_problems().first() {
                return Err(rejected(VerifyError::at(1, p.clone())));
            }
        }
        ReportResult::Construct { tuple, summary } => {
            let t = tuple.rebuild()?;
            if TupleSummary::of(&t) != *summary {
                return Err(rejected(VerifyError::at(0, "tuple summary differs from the rebuilt tuple")));
            }
        }
        ReportResult::Certify { tuple, summary, symbolic, specialized } => {
            let t = tuple.rebuild()?;
            if TupleSummary::of(&t) != *summary {
                return Err(rejected(VerifyError::at(0, "tuple summary differs from the rebuilt tuple")));
            }
            if symbolic.is_none() && specialized.is_none() {
                return Err(CliError::Malformed("report carries no certificate".into()));
            }
            for c in [symbolic, specialized].into_iter().flatten() {
                c.verify(&t).map_err(rejected)?;
            }
        }
        ReportResult::Pfister { arity, candidate, certificate } => {
            let form = PfisterForm::new(*arity).map_err(|e| CliError::Malformed(e.to_string()))?;
            let cand = IsotropyCandidate::parse(candidate).map_err(|e| CliError::Malformed(e.to_string()))?;
            verify_descent(&form, &cand, certificate).map_err(rejected)?;
        }
        ReportResult::NormForm { report } => {
            if !report.verify() {
                return Err(rejected(VerifyError::at(0, "norm form classes or anisotropy tree do not check out")));
            }
        }
    }
    Ok(())
}

pub fn parse_report(text: &str) -> Result<Report, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))
}

pub fn verify_certificate(path: &Path) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    match verify_report(&parse_report(&text)?) {
        Ok(()) => Ok(true),
        Err(CliError::Rejected(_)) => Ok(false),
        Err(e) => Err(e),
    }
}
