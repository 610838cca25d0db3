//! Command-line front end for `psi-core`.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 mathematical
//! inconsistency (strategy disagreement, cache conflict, identity failure).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psi_core::arith::format_rational;
use psi_core::key::enumerate_keys;
use psi_core::verify::{IdentityId, IdentityReport, Verifier};
use psi_core::{CacheStore, CorrelatorKey, Evaluator, Rational, Strategy};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

mod literal;

pub use literal::{parse_correlator, LiteralError};

/// Deep recursions (high genus, many points) need more than the default
/// thread stack.
pub const STACK_SIZE: usize = 512 * 1024 * 1024;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error(transparent)]
    Core(#[from] psi_core::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("strategies disagree on {key}: {details}")]
    Disagreement { key: String, details: String },
    #[error("{0} identity suite(s) failed")]
    IdentityFailure(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use psi_core::Error as E;
        match self {
            CliError::Disagreement { .. } | CliError::IdentityFailure(_) => 2,
            CliError::Core(E::Conflict { .. } | E::Inconsistency(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "psi", version, about = "Exact psi-class intersection numbers")]
pub struct Cli {
    /// Cache file: loaded if it exists, written back after the command.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate correlator literals such as "<t2 t3>_2".
    Eval(EvalArgs),
    /// Tabulate every stable correlator of one genus.
    Table(TableArgs),
    /// Run identity suites.
    Verify(VerifyArgs),
    /// Time table generation per strategy, each with a fresh cache.
    Bench(BenchArgs),
    /// Export or import the cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyChoice {
    Dvv,
    Genus,
    Maxidx,
    Npoint,
    All,
}

impl StrategyChoice {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyChoice::Dvv => vec![Strategy::Dvv],
            StrategyChoice::Genus => vec![Strategy::Genus],
            StrategyChoice::Maxidx => vec![Strategy::MaxIndex],
            StrategyChoice::Npoint => vec![Strategy::NPoint],
            StrategyChoice::All => Strategy::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleStrategy {
    Dvv,
    Genus,
    Maxidx,
    Npoint,
}

impl From<SingleStrategy> for Strategy {
    fn from(s: SingleStrategy) -> Self {
        match s {
            SingleStrategy::Dvv => Strategy::Dvv,
            SingleStrategy::Genus => Strategy::Genus,
            SingleStrategy::Maxidx => Strategy::MaxIndex,
            SingleStrategy::Npoint => Strategy::NPoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValueFormat {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Thm11,
    Thm12,
    Grouped,
    Prop24,
    Lemma25,
    Prop26,
}

impl Suite {
    fn ids(self) -> Vec<IdentityId> {
        match self {
            Suite::All => IdentityId::ALL.to_vec(),
            Suite::Thm11 => vec![IdentityId::Thm11],
            Suite::Thm12 => vec![IdentityId::Thm12],
            Suite::Grouped => vec![IdentityId::Grouped],
            Suite::Prop24 => vec![IdentityId::Prop24],
            Suite::Lemma25 => vec![IdentityId::Lemma25],
            Suite::Prop26 => vec![IdentityId::Prop26],
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value = "genus")]
    pub strategy: StrategyChoice,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: ValueFormat,
    /// Print cache hit/miss counts to stderr.
    #[arg(long)]
    pub stats: bool,
    #[arg(required = true, value_name = "CORRELATOR")]
    pub correlators: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub genus: u32,
    #[arg(long)]
    pub max_n: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[arg(long, value_enum, default_value = "genus")]
    pub strategy: SingleStrategy,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 2)]
    pub gmax: u32,
    /// Point bound; for generating identities, every n in 1..=nmax.
    #[arg(long, default_value_t = 2)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: ValueFormat,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub genus: u32,
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub strategy: StrategyChoice,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Write the session cache to a file.
    Export {
        #[arg(long)]
        file: PathBuf,
    },
    /// Merge a cache file into the session cache.
    Import {
        #[arg(long)]
        file: PathBuf,
    },
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let cache = match &cli.cache {
        Some(path) if path.exists() => CacheStore::load(path)?,
        _ => CacheStore::new(),
    };
    let result = match &cli.command {
        Command::Eval(args) => cmd_eval(args, &cache, out),
        Command::Table(args) => cmd_table(args, &cache, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Bench(args) => cmd_bench(args, out),
        Command::Cache { action } => cmd_cache(action, &cache, out),
    };
    result?;
    if let Some(path) = &cli.cache {
        if cache.is_dirty() || !path.exists() {
            cache.save(path)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ValueRecord<'a> {
    g: u32,
    d: &'a [u32],
    value: String,
}

fn value_line(key: &CorrelatorKey, value: &Rational, format: ValueFormat) -> String {
    match format {
        ValueFormat::Plain => format_rational(value),
        ValueFormat::Json => {
            let record = ValueRecord { g: key.genus(), d: key.indices(), value: format_rational(value) };
            serde_json::to_string(&record).expect("record serializes")
        }
    }
}

pub fn cmd_eval(args: &EvalArgs, cache: &CacheStore, out: &mut dyn Write) -> CliResult {
    let keys = args
        .correlators
        .iter()
        .map(|text| parse_correlator(text))
        .collect::<Result<Vec<_>, _>>()?;
    for key in &keys {
        let value = if args.strategy == StrategyChoice::All {
            eval_all(key, cache)?
        } else {
            Evaluator::new(args.strategy.strategies()[0], cache).eval(key)?
        };
        writeln!(out, "{}", value_line(key, &value, args.format))?;
    }
    if args.stats {
        let stats = cache.stats();
        eprintln!("cache: {} hits, {} misses, {} entries", stats.hits, stats.misses, cache.len());
    }
    Ok(())
}

/// Evaluates with every strategy on its own fresh cache so the results are
/// independent, then records the agreed value in `cache`.
fn eval_all(key: &CorrelatorKey, cache: &CacheStore) -> CliResult<Rational> {
    let mut values = Vec::new();
    for strategy in Strategy::ALL {
        let fresh = CacheStore::new();
        values.push((strategy, Evaluator::new(strategy, &fresh).eval(key)?));
    }
    let first = values[0].1.clone();
    if values.iter().any(|(_, v)| v != &first) {
        let details = values
            .iter()
            .map(|(s, v)| format!("{s}={}", format_rational(v)))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(CliError::Disagreement { key: key.to_string(), details });
    }
    if !key.is_trivially_zero() {
        cache.insert(key.clone(), first.clone())?;
    }
    Ok(first)
}

/// Stable keys of one genus with `1 <= n <= max_n`, ascending.
pub fn table_keys(genus: u32, max_n: usize) -> Vec<CorrelatorKey> {
    let mut keys: Vec<CorrelatorKey> = (1..=max_n).flat_map(|n| enumerate_keys(genus, n)).collect();
    keys.sort();
    keys
}

fn compute_table(keys: &[CorrelatorKey], strategy: Strategy, cache: &CacheStore) -> CliResult<Vec<Rational>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(STACK_SIZE / 4)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let evaluator = Evaluator::new(strategy, cache);
    let values = pool.install(|| keys.par_iter().map(|k| evaluator.eval(k)).collect::<Result<Vec<_>, _>>())?;
    Ok(values)
}

pub fn cmd_table(args: &TableArgs, cache: &CacheStore, out: &mut dyn Write) -> CliResult {
    let keys = table_keys(args.genus, args.max_n);
    let values = compute_table(&keys, args.strategy.into(), cache)?;
    let mut file_out;
    let sink: &mut dyn Write = match &args.out {
        Some(path) => {
            file_out = BufWriter::new(File::create(path)?);
            &mut file_out
        }
        None => out,
    };
    write_table(sink, &keys, &values, args.format)?;
    sink.flush()?;
    Ok(())
}

pub fn write_table(
    out: &mut dyn Write,
    keys: &[CorrelatorKey],
    values: &[Rational],
    format: TableFormat,
) -> io::Result<()> {
    if format == TableFormat::Csv {
        writeln!(out, "g,d,value")?;
    }
    for (key, value) in keys.iter().zip(values) {
        match format {
            TableFormat::Csv => {
                let d: Vec<String> = key.indices().iter().map(u32::to_string).collect();
                writeln!(out, "{},{},{}", key.genus(), d.join(" "), format_rational(value))?;
            }
            TableFormat::Jsonl => writeln!(out, "{}", value_line(key, value, ValueFormat::Json))?,
        }
    }
    Ok(())
}

fn report_plain(report: &IdentityReport, out: &mut dyn Write) -> io::Result<()> {
    let status = if report.passed() { "pass" } else { "FAIL" };
    writeln!(
        out,
        "{}: {status} ({} checked, {} failures)",
        report.identity_id,
        report.instances_checked,
        report.failures.len()
    )?;
    for f in &report.failures {
        writeln!(out, "  {}: lhs {} rhs {}", f.instance, f.lhs, f.rhs)?;
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    if args.gmax < 1 {
        return Err(CliError::Usage("--gmax must be at least 1".into()));
    }
    let verifier = Verifier::new();
    let mut failed = 0;
    for id in args.suite.ids() {
        let report = verifier.run(id, args.gmax, args.nmax)?;
        match args.format {
            ValueFormat::Plain => report_plain(&report, out)?,
            ValueFormat::Json => writeln!(out, "{}", report.to_json())?,
        }
        if !report.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::IdentityFailure(failed));
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CliResult {
    let keys = table_keys(args.genus, args.max_n);
    for strategy in args.strategy.strategies() {
        let cache = CacheStore::new();
        let start = Instant::now();
        compute_table(&keys, strategy, &cache)?;
        writeln!(
            out,
            "{strategy}: {} keys, {} cached entries, {:.3?}",
            keys.len(),
            cache.len(),
            start.elapsed()
        )?;
    }
    Ok(())
}

pub fn cmd_cache(action: &CacheAction, cache: &CacheStore, out: &mut dyn Write) -> CliResult {
    match action {
        CacheAction::Export { file } => {
            cache.save(file)?;
            writeln!(out, "exported {} entries to {}", cache.len(), file.display())?;
        }
        CacheAction::Import { file } => {
            let added = cache.merge_file(file)?;
            writeln!(out, "imported {added} new entries from {}", file.display())?;
        }
    }
    Ok(())
}
