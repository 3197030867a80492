//! The command implementations behind the `hermgrass` binary.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use hermgrass_core::analysis::distance::{
    formula_certificate, formula_distance, witness_certificate, DEFAULT_POINT_BUDGET,
    DEFAULT_SUBFIELD_BUDGET,
};
use hermgrass_core::analysis::dual::DEFAULT_SUBSET_BUDGET;
use hermgrass_core::analysis::enumerate::message_count;
use hermgrass_core::analysis::{
    d_affine_formula, d_hermitian_formula, dual_min_distance, is_dual_word, min_distance_exhaustive,
    min_distance_subfield_default, DistanceCertificate, DistanceMethod,
};
use hermgrass_core::codebuild::io::write_generator;
use hermgrass_core::codebuild::binomial;
use hermgrass_core::{CodeFamily, CodeSpec, Error, FieldTower, GeneratorMatrix};

use crate::report::{Format, Report};
use crate::verify::{cmd_verify, Suite};

pub const SUPPORTED_Q: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Tables certify a row by enumeration only when its length is at most this.
pub const TABLE_CERTIFY_MAX_LENGTH: u128 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Messages enumerated by minimum-distance searches.
    pub messages: u128,
    /// Column subsets examined per size by the dual-distance search.
    pub subsets: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            messages: DEFAULT_SUBFIELD_BUDGET,
            subsets: DEFAULT_SUBSET_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Formula,
    Witness,
    Subfield,
    Exhaustive,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "formula" => Ok(Method::Formula),
            "witness" => Ok(Method::Witness),
            "subfield" => Ok(Method::Subfield),
            "exhaustive" => Ok(Method::Exhaustive),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Params,
    Gen,
    MinDist(Method),
    DualDist,
    Verify(Suite),
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub q: Option<u32>,
    pub ell: Option<usize>,
    pub family: CodeFamily,
    pub budgets: Budgets,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            q: None,
            ell: None,
            family: CodeFamily::Hermitian,
            budgets: Budgets::default(),
            out: None,
            format: Format::Text,
            seed: crate::verify::DEFAULT_SEED,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    /// 1 mismatch, 2 usage, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } | Error::TooLarge { .. } | Error::TooLargeForBruteForce { .. } => 3,
                Error::Precondition(_) | Error::Parse(_) | Error::Io(_) | Error::UnsupportedEll(_) => 2,
                _ => 1,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

/// A finished command: the text to print and whether every check agreed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn require_q(q: Option<u32>) -> Result<u32, CliError> {
    let q = q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
    if SUPPORTED_Q.contains(&q) {
        Ok(q)
    } else {
        Err(CliError::Usage(format!("q = {q} not in {SUPPORTED_Q:?}")))
    }
}

fn require_ell(ell: Option<usize>, max: usize) -> Result<usize, CliError> {
    let ell = ell.ok_or_else(|| CliError::Usage("--ell is required".into()))?;
    if (1..=max).contains(&ell) {
        Ok(ell)
    } else {
        Err(CliError::Usage(format!("ell = {ell} outside 1..={max}")))
    }
}

fn tower(q: u32) -> Result<Arc<FieldTower>, CliError> {
    Ok(Arc::new(FieldTower::for_q(q)?))
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = match &config.command {
        Command::Params => cmd_params(require_q(config.q)?, require_ell(config.ell, 4)?),
        Command::Gen => {
            let q = require_q(config.q)?;
            let ell = require_ell(config.ell, 3)?;
            return cmd_gen(q, ell, config.family, config.out.as_deref(), config.format);
        }
        Command::MinDist(method) => cmd_mindist(
            require_q(config.q)?,
            require_ell(config.ell, 3)?,
            config.family,
            *method,
            config.budgets,
        )?,
        Command::DualDist => cmd_dualdist(require_q(config.q)?, require_ell(config.ell, 3)?, config.budgets)?,
        Command::Verify(suite) => {
            if let Some(q) = config.q {
                require_q(Some(q))?;
            }
            cmd_verify(*suite, config.q, config.budgets, config.seed)
        }
        Command::Table => {
            let ell = require_ell(config.ell, 3)?;
            if ell < 2 {
                return Err(CliError::Usage("tables exist for ell = 2 and ell = 3".into()));
            }
            let (csv, passed) = cmd_table(ell, config.budgets);
            return finish(csv, passed, config.out.as_deref());
        }
    };
    let passed = report.all_passed();
    finish(report.render(config.format), passed, config.out.as_deref())
}

fn finish(output: String, passed: bool, out: Option<&Path>) -> Result<Outcome, CliError> {
    if let Some(path) = out {
        std::fs::write(path, &output)?;
    }
    Ok(Outcome { output, passed })
}

/// Closed-form parameters of both codes; no enumeration.
pub fn cmd_params(q: u32, ell: usize) -> Report {
    let h = CodeSpec::hermitian(q, ell);
    let mut r = Report::new(format!("params q={q} ell={ell}"));
    r.field("q", q)
        .field("ell", ell)
        .field("n", h.n())
        .field("k", h.k())
        .field(
            "d_hermitian",
            d_hermitian_formula(ell as u32, q as u64).map_or("n/a".to_string(), |d| d.to_string()),
        )
        .field("d_affine", d_affine_formula(ell as u32, q as u64));
    r
}

/// Builds a generator, writes it to `out` (stdout when absent) and reports its rank.
pub fn cmd_gen(
    q: u32,
    ell: usize,
    family: CodeFamily,
    out: Option<&Path>,
    format: Format,
) -> Result<Outcome, CliError> {
    let g = GeneratorMatrix::build(tower(q)?, family, ell)?;
    let mut r = Report::new(format!("gen {}", g.spec()));
    r.field("rows", g.k()).field("columns", g.n()).field("rank", g.rank());
    let passed = g.rank() == g.k();
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_generator(&g, &mut w)?;
            w.flush()?;
            r.field("file", path.display());
            Ok(Outcome {
                output: r.render(format),
                passed,
            })
        }
        None => {
            let mut buf = Vec::new();
            write_generator(&g, &mut buf)?;
            Ok(Outcome {
                output: String::from_utf8(buf).expect("ascii"),
                passed,
            })
        }
    }
}

fn certificate_report(cert: &DistanceCertificate) -> Report {
    let mut r = Report::new(format!("mindist {}", cert.spec));
    r.field("code", cert.spec)
        .field("n", cert.spec.n())
        .field("k", cert.spec.k())
        .field("d", cert.d)
        .field("method", cert.method.name())
        .field("messages", cert.messages);
    if let Some(c) = cert.minimum_weight_messages {
        r.field("minimum_weight_messages", c);
    }
    if let Some(w) = &cert.witness {
        r.field("witness", w);
    }
    r
}

pub fn mindist_certificate(
    q: u32,
    ell: usize,
    family: CodeFamily,
    method: Method,
    budgets: Budgets,
) -> Result<DistanceCertificate, CliError> {
    let spec = CodeSpec { family, q, ell };
    let no_formula = || CliError::Usage(format!("no closed form for {spec}"));
    match method {
        Method::Formula => formula_certificate(spec).ok_or_else(no_formula),
        Method::Witness => {
            formula_distance(spec).ok_or_else(no_formula)?;
            Ok(witness_certificate(spec, DEFAULT_POINT_BUDGET)?)
        }
        Method::Subfield | Method::Exhaustive => {
            let alphabet = match (family, method) {
                (CodeFamily::Hermitian, Method::Exhaustive) => (q * q) as usize,
                _ => q as usize,
            };
            let needed = message_count(alphabet, spec.k());
            if needed > budgets.messages {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget: budgets.messages,
                }
                .into());
            }
            let g = GeneratorMatrix::build(tower(q)?, family, ell)?;
            Ok(match method {
                Method::Subfield => min_distance_subfield_default(&g, budgets.messages)?,
                _ => min_distance_exhaustive(&g, budgets.messages)?,
            })
        }
    }
}

pub fn cmd_mindist(
    q: u32,
    ell: usize,
    family: CodeFamily,
    method: Method,
    budgets: Budgets,
) -> Result<Report, CliError> {
    let cert = mindist_certificate(q, ell, family, method, budgets)?;
    let mut r = certificate_report(&cert);
    if cert.method != DistanceMethod::Formula {
        if let Some(d) = formula_distance(cert.spec) {
            r.check(
                "closed form",
                cert.d == d,
                format!("enumerated {} vs formula {d}", cert.d),
                Default::default(),
            );
        }
    }
    Ok(r)
}

/// Dual distance of C^H(ell) with the dependent columns rendered as matrices.
pub fn cmd_dualdist(q: u32, ell: usize, budgets: Budgets) -> Result<Report, CliError> {
    let g = GeneratorMatrix::build(tower(q)?, CodeFamily::Hermitian, ell)?;
    let cert = dual_min_distance(&g, 4, budgets.subsets)?;
    let idx = g.hermitian_indexing().expect("Hermitian family");
    let mut r = Report::new(format!("dualdist {}", g.spec()));
    r.field("code", g.spec())
        .field("d_dual", cert.d_dual)
        .field("subsets_exhausted", cert.subsets_exhausted);
    let mut support = Report::new("support");
    for (&t, c) in cert.dependent_columns.iter().zip(&cert.coefficients) {
        support.field(
            format!("P{t}"),
            format!("{} coefficient {c}", idx.index_to_matrix(t as u64)?),
        );
    }
    r.section(support);
    let expected = if q == 2 { 4 } else { 3 };
    r.check(
        "dual codeword",
        is_dual_word(&g, &cert.dependent_columns, &cert.coefficients),
        "orthogonal to every generator row",
        Default::default(),
    );
    if ell >= 2 {
        r.check(
            "closed form",
            cert.d_dual == expected,
            format!("found {} vs expected {expected}", cert.d_dual),
            Default::default(),
        );
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub q: u32,
    pub n: u128,
    pub k: usize,
    pub d_affine: u128,
    pub d_hermitian: u128,
    /// "certified", "formula" or "mismatch".
    pub status: &'static str,
}

fn certify(spec: CodeSpec, budgets: Budgets) -> Option<u128> {
    if spec.n() > TABLE_CERTIFY_MAX_LENGTH || message_count(spec.q as usize, spec.k()) > budgets.messages {
        return None;
    }
    let method = match spec.family {
        CodeFamily::Hermitian => Method::Subfield,
        CodeFamily::Affine => Method::Exhaustive,
    };
    mindist_certificate(spec.q, spec.ell, spec.family, method, budgets)
        .ok()
        .map(|c| c.d)
}

pub fn table_rows(ell: usize, budgets: Budgets) -> Vec<TableRow> {
    SUPPORTED_Q
        .iter()
        .map(|&q| {
            let h = CodeSpec::hermitian(q, ell);
            let a = CodeSpec::affine(q, ell);
            let d_hermitian = d_hermitian_formula(ell as u32, q as u64).expect("ell >= 2");
            let d_affine = d_affine_formula(ell as u32, q as u64);
            let status = match (certify(h, budgets), certify(a, budgets)) {
                (Some(dh), Some(da)) if dh == d_hermitian && da == d_affine => "certified",
                (Some(_), Some(_)) => "mismatch",
                _ => "formula",
            };
            TableRow {
                q,
                n: h.n(),
                k: binomial(2 * ell as u64, ell as u64) as usize,
                d_affine,
                d_hermitian,
                status,
            }
        })
        .collect()
}

/// Both code families side by side from the closed forms, as comma-separated text.
pub fn cmd_table(ell: usize, budgets: Budgets) -> (String, bool) {
    let rows = table_rows(ell, budgets);
    let mut out = format!("q,n,k,d(C^A({ell},{})),d(C^H({ell})),status\n", 2 * ell);
    for r in &rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.q, r.n, r.k, r.d_affine, r.d_hermitian, r.status
        ));
    }
    (out, rows.iter().all(|r| r.status != "mismatch"))
}
