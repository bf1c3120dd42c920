//! Command-line driver: runs one operation per catalog group and emits a report.
//!
//! Per-group work runs on a rayon pool; results are collected in label order,
//! so the report payload does not depend on the worker count.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use engelhaar::catalog::{parse_catalog, Catalog, CatalogEntry, CatalogError};
use engelhaar::Measure;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

mod ops;
pub mod report;

pub use report::{Report, Skipped, Timing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OPERATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "engelhaar",
    version,
    about = "Word sets, translate measures and commutator laws on finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// A word set on each group: `torsion:N`, `inverted:AUT` or `splitting:AUT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    Torsion(usize),
    Inverted(String),
    Splitting(String),
}

impl FromStr for SetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("expected KIND:ARG, got {s:?}"))?;
        if arg.is_empty() {
            return Err(format!("missing argument in {s:?}"));
        }
        match kind {
            "torsion" => arg.parse().map(SetSpec::Torsion).map_err(|_| {
                format!("torsion exponent must be a non-negative integer, got {arg:?}")
            }),
            "inverted" => Ok(SetSpec::Inverted(arg.to_string())),
            "splitting" => Ok(SetSpec::Splitting(arg.to_string())),
            _ => Err(format!(
                "unknown set kind {kind:?}; expected torsion, inverted or splitting"
            )),
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Torsion(n) => write!(f, "torsion:{n}"),
            SetSpec::Inverted(a) => write!(f, "inverted:{a}"),
            SetSpec::Splitting(a) => write!(f, "splitting:{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Proof,
    Direct,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    let m: Measure = s.parse().map_err(|_| format!("expected p/q, got {s:?}"))?;
    Ok(m)
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Catalog file; the bundled catalog when omitted.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Restrict to one group; operation errors then exit with status 1.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Word set (repeatable for `lambda` and `average`).
    #[arg(long = "set", global = true)]
    pub sets: Vec<SetSpec>,
    #[arg(long, value_enum, global = true, default_value = "both")]
    pub mode: ModeArg,
    /// Tuple length for `klarge`; number of functions for `psi`.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, global = true, default_value = "greedy")]
    pub strategy: StrategyArg,
    /// Skip groups of larger order.
    #[arg(long, global = true)]
    pub max_order: Option<usize>,
    /// Work budget passed to searches and tuple scans.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Minimum target measure for extraction, as p/q.
    #[arg(long, global = true, value_parser = parse_measure)]
    pub threshold: Option<Measure>,
    /// Translating elements for `lambda`, one per set.
    #[arg(long, global = true, value_delimiter = ',')]
    pub at: Vec<usize>,
    /// First element of the pair for certificate commands.
    #[arg(long, global = true)]
    pub a: Option<usize>,
    /// Second element of the pair for certificate commands.
    #[arg(long, global = true)]
    pub b: Option<usize>,
    /// Tower name for `tower`; all towers when omitted.
    #[arg(long, global = true)]
    pub tower: Option<String>,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            catalog: None,
            group: None,
            sets: Vec::new(),
            mode: ModeArg::Both,
            k: 2,
            strategy: StrategyArg::Greedy,
            max_order: None,
            budget: None,
            seed: 0,
            out: None,
            format: Format::Json,
            workers: 0,
            threshold: None,
            at: Vec::new(),
            a: None,
            b: None,
            tower: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Measure of a word set.
    Measure,
    /// Measure of the intersection of translates `x_i A_i`.
    Lambda,
    /// Exact average of lambda over all translate tuples against the product of measures.
    Average,
    /// Seeded random functions: psi at two tuples and the translate-distance bound.
    Psi,
    /// Symmetric witness set for k-largeness of a word set.
    Klarge,
    /// Elements with `x^N = 1`.
    Torsion { n: usize },
    /// Elements sent to their inverse by an automorphism.
    Inverted {
        #[arg(default_value = "identity")]
        aut: String,
    },
    /// Solutions of the splitting word for an automorphism of order dividing 3.
    Splitting {
        #[arg(default_value = "identity")]
        aut: String,
    },
    /// Largest subgroup with a left coset inside a word set.
    Witness,
    /// Commuting certificates on an inverted set.
    CommuteCert,
    /// Engel certificates on a splitting set.
    EngelCert,
    /// Normal abelian subgroup and coset slice from an inverted set.
    ExtractAbelian,
    /// Normal 2-Engel subgroup from a splitting set.
    ExtractEngel,
    /// Whether the group satisfies `[a, b, b] = 1`.
    Engel,
    /// Lower central series and nilpotency class.
    Class,
    /// Exhaustive law checks.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Torsion measure along each tower.
    Tower,
    /// Load the catalog and summarize every entry.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum VerifyCommand {
    /// Triples meeting the eight cube conditions satisfy `[a, b, b] = 1`.
    #[command(name = "lemma-2engel")]
    Lemma2Engel,
    /// Class at most 3 and `[x, y, z][x, z, y] = 1` on 2-Engel groups.
    #[command(name = "engel-consequences")]
    EngelConsequences,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Measure => "measure".into(),
            Command::Lambda => "lambda".into(),
            Command::Average => "average".into(),
            Command::Psi => "psi".into(),
            Command::Klarge => "klarge".into(),
            Command::Torsion { .. } => "torsion".into(),
            Command::Inverted { .. } => "inverted".into(),
            Command::Splitting { .. } => "splitting".into(),
            Command::Witness => "witness".into(),
            Command::CommuteCert => "commute-cert".into(),
            Command::EngelCert => "engel-cert".into(),
            Command::ExtractAbelian => "extract-abelian".into(),
            Command::ExtractEngel => "extract-engel".into(),
            Command::Engel => "engel".into(),
            Command::Class => "class".into(),
            Command::Verify {
                check: VerifyCommand::Lemma2Engel,
            } => "verify lemma-2engel".into(),
            Command::Verify {
                check: VerifyCommand::EngelConsequences,
            } => "verify engel-consequences".into(),
            Command::Tower => "tower".into(),
            Command::Validate => "validate".into(),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an unusable catalog.
    Invalid(String),
    /// An operation failed on an explicitly requested group or tower.
    Operation {
        label: String,
        message: String,
    },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Operation { .. } | CliError::Io(_) => EXIT_OPERATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Operation { label, message } => write!(f, "{label}: {message}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Per-item result: a payload and whether it records a law counterexample.
pub(crate) struct Output {
    pub value: Value,
    pub finding: bool,
}

impl From<Value> for Output {
    fn from(value: Value) -> Self {
        Output {
            value,
            finding: false,
        }
    }
}

pub(crate) type OpResult = Result<Output, String>;

pub fn load_catalog(flags: &Flags) -> Result<(Catalog, String), CliError> {
    match &flags.catalog {
        Some(path) => Ok((parse_catalog(path)?, path.display().to_string())),
        None => Ok((Catalog::bundled(), "bundled".to_string())),
    }
}

/// Loads the catalog named by the flags and runs the command.
pub fn run(command: &Command, flags: &Flags) -> Result<Report, CliError> {
    let (catalog, name) = load_catalog(flags)?;
    run_command(command, &catalog, &name, flags)
}

pub fn run_command(
    command: &Command,
    catalog: &Catalog,
    catalog_name: &str,
    flags: &Flags,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.workers)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let workers = pool.current_num_threads();

    let (outputs, skipped) = if *command == Command::Tower {
        pool.install(|| ops::towers(catalog, flags))?
    } else {
        let op = ops::group_op(command, flags)?;
        let (entries, mut skipped) = select_entries(catalog, flags)?;
        let outcomes: Vec<(String, OpResult)> = pool.install(|| {
            entries
                .par_iter()
                .map(|e| (e.label().to_string(), op(e)))
                .collect()
        });
        let mut outputs = Vec::new();
        for (label, outcome) in outcomes {
            match outcome {
                Ok(out) => outputs.push((label, out)),
                Err(message) if flags.group.is_some() => {
                    return Err(CliError::Operation { label, message })
                }
                Err(reason) => skipped.push(Skipped { label, reason }),
            }
        }
        skipped.sort_by(|a, b| a.label.cmp(&b.label));
        (outputs, skipped)
    };

    let findings = outputs.iter().filter(|(_, o)| o.finding).count();
    let results = outputs
        .into_iter()
        .map(|(label, o)| {
            let mut v = o.value;
            if let Value::Object(m) = &mut v {
                m.insert("label".into(), Value::String(label));
            }
            v
        })
        .collect();

    Ok(Report {
        tool: report::TOOL,
        version: report::VERSION,
        catalog: catalog_name.to_string(),
        command: command.name(),
        parameters: parameters(command, flags),
        results,
        skipped,
        findings,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            workers,
        },
    })
}

fn select_entries<'c>(
    catalog: &'c Catalog,
    flags: &Flags,
) -> Result<(Vec<&'c CatalogEntry>, Vec<Skipped>), CliError> {
    let mut entries = match &flags.group {
        Some(label) => vec![catalog.entry(label)?],
        None => catalog.sorted_entries(),
    };
    let mut skipped = Vec::new();
    if let Some(cap) = flags.max_order {
        entries.retain(|e| {
            let keep = e.group.order() <= cap;
            if !keep {
                skipped.push(Skipped {
                    label: e.label().to_string(),
                    reason: format!("order {} exceeds --max-order {cap}", e.group.order()),
                });
            }
            keep
        });
    }
    Ok((entries, skipped))
}

/// Normalized inputs that affect results. Rendering flags and the worker
/// count are left out.
fn parameters(command: &Command, flags: &Flags) -> Map<String, Value> {
    let mut p = Map::new();
    p.insert("group".into(), json!(flags.group));
    p.insert("max_order".into(), json!(flags.max_order));
    p.insert("budget".into(), json!(flags.budget));
    let uses = |names: &[&str]| names.contains(&command.name().as_str());
    if !flags.sets.is_empty()
        || uses(&[
            "commute-cert",
            "engel-cert",
            "extract-abelian",
            "extract-engel",
            "tower",
        ])
    {
        let sets: Vec<String> = ops::sets_or_default(command, flags)
            .iter()
            .map(ToString::to_string)
            .collect();
        p.insert("sets".into(), json!(sets));
    }
    match command {
        Command::Torsion { n } => {
            p.insert("n".into(), json!(n));
        }
        Command::Inverted { aut } | Command::Splitting { aut } => {
            p.insert("automorphism".into(), json!(aut));
        }
        _ => {}
    }
    if uses(&["klarge", "psi"]) {
        p.insert("k".into(), json!(flags.k));
    }
    if uses(&["klarge"]) {
        p.insert(
            "strategy".into(),
            json!(format!("{:?}", flags.strategy).to_lowercase()),
        );
    }
    if uses(&["psi"]) {
        p.insert("seed".into(), json!(flags.seed));
    }
    if uses(&["extract-abelian", "extract-engel"]) {
        p.insert(
            "mode".into(),
            json!(format!("{:?}", flags.mode).to_lowercase()),
        );
        p.insert(
            "threshold".into(),
            json!(engelhaar::subset::format_measure(
                &flags.threshold.unwrap_or_else(|| Measure::new(0, 1))
            )),
        );
    }
    if uses(&["lambda"]) {
        p.insert("at".into(), json!(flags.at));
    }
    if uses(&["commute-cert", "engel-cert"]) {
        p.insert("a".into(), json!(flags.a));
        p.insert("b".into(), json!(flags.b));
    }
    if uses(&["tower"]) {
        p.insert("tower".into(), json!(flags.tower));
    }
    p
}

/// Renders the report in the requested format.
pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv().map_err(|e| CliError::Io(e.to_string())),
    }
}
