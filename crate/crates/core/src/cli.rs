//! The `mmdscan` command line.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage error, and for `scan`
//! only, 3 when the decision is H1. Errors are written to standard error as
//! `{"error":{"code":...,"message":...}}`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::detector::{scan, Algorithm, MultiscaleParams, TestConfig, ThresholdRule};
use crate::error::{Error, Result};
use crate::experiments::{run_plan, ExperimentPlan};
use crate::intervals::{DyadicGrid, ExtensionShapes, Interval};
use crate::io::{read_samples, write_atomic};
use crate::kernels::{Kernel, KernelKind};
use crate::mmd::{mmd2_unbiased, SampleSeries, SummaryMode, SummaryOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ALARM: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "mmdscan", version, about = "Kernel MMD scan test on a line network")]
pub struct Cli {
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Log verbosity on standard error (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test for an anomalous interval; exits with 3 when H1 is declared.
    #[command(version)]
    Scan(ScanArgs),
    /// Unbiased MMD² between two sample files.
    #[command(version)]
    Mmd(MmdArgs),
    /// Run a Monte Carlo experiment plan.
    #[command(version)]
    Experiment(ExperimentArgs),
    /// Dump the dyadic grid or one extension family as CSV.
    #[command(version)]
    Intervals(IntervalsArgs),
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, default_value = "gaussian")]
    pub kernel: KernelKind,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("threshold_rule").required(true)))]
pub struct ScanArgs {
    /// Reference samples, one per node.
    #[arg(long)]
    pub reference: PathBuf,
    /// Observed samples, one per node.
    #[arg(long)]
    pub observed: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Minimum candidate length.
    #[arg(long)]
    pub imin: usize,
    /// Fixed threshold t.
    #[arg(long, group = "threshold_rule", allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    /// Known MMD²; the threshold is (1 - delta) times this value.
    #[arg(long, group = "threshold_rule", requires = "delta")]
    pub known_mmd: Option<f64>,
    #[arg(long, requires = "known_mmd")]
    pub delta: Option<f64>,
    /// Decaying threshold 4 sqrt(ln n / n^0.9).
    #[arg(long, group = "threshold_rule")]
    pub decaying: bool,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long, default_value = "exhaustive")]
    pub algorithm: Algorithm,
    /// Multiscale pre-scan threshold t' (default t / 2).
    #[arg(long)]
    pub tprime: Option<f64>,
    /// Multiscale cardinality slack (default eta).
    #[arg(long)]
    pub delta_alg: Option<f64>,
    /// Multiscale extension depth.
    #[arg(long)]
    pub levels: Option<u32>,
    /// Gram summary layout: auto, dense or streaming.
    #[arg(long, default_value = "auto")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct MmdArgs {
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// TOML plan file.
    #[arg(long)]
    pub plan: PathBuf,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional JSON output path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Overrides the plan seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct IntervalsArgs {
    #[arg(long)]
    pub n: usize,
    /// Start of a dyadic base cell; with --base-length, dumps its extensions.
    #[arg(long, requires = "base_length")]
    pub base_start: Option<usize>,
    #[arg(long, requires = "base_start")]
    pub base_length: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub levels: u32,
}

enum Failure {
    Usage(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Usage)
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: DiagnosticBody<'a>,
}

#[derive(Serialize)]
struct DiagnosticBody<'a> {
    code: &'a str,
    message: String,
}

fn report(error: &Error) {
    let d = Diagnostic {
        error: DiagnosticBody {
            code: error.code(),
            message: error.to_string(),
        },
    };
    eprintln!("{}", serde_json::to_string(&d).expect("diagnostic serializes"));
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

/// Parses `args` (program name first) and runs the command; returns the exit
/// code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            report(&Error::invalid(format!("cannot start thread pool: {e}")));
            return EXIT_RUNTIME;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Scan(args) => run_scan(args),
        Command::Mmd(args) => run_mmd(args),
        Command::Experiment(args) => run_experiment(args),
        Command::Intervals(args) => run_intervals(args),
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            report(&e);
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            report(&e);
            EXIT_RUNTIME
        }
    }
}

fn emit(text: &str) -> std::result::Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(Error::from)?;
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn run_scan(args: &ScanArgs) -> std::result::Result<u8, Failure> {
    let kernel = usage(Kernel::new(args.kernel.kernel, args.kernel.sigma))?;
    let threshold = match (args.threshold, args.known_mmd, args.delta, args.decaying) {
        (Some(t), _, _, _) => ThresholdRule::Fixed { t },
        (_, Some(mmd2), Some(delta), _) => ThresholdRule::KnownMmd { mmd2, delta },
        _ => ThresholdRule::Decaying,
    };
    let mut config = TestConfig::new(args.imin, threshold)
        .with_algorithm(args.algorithm)
        .with_eta(args.eta)
        .with_multiscale(MultiscaleParams {
            t_prime: args.tprime,
            delta_alg: args.delta_alg,
            levels: args.levels,
        });
    if args.mode != "auto" {
        let mode: SummaryMode = usage(args.mode.parse())?;
        config = config.with_summaries(SummaryOptions::from(mode));
    }
    if let ThresholdRule::KnownMmd { .. } | ThresholdRule::Fixed { .. } = threshold {
        usage(threshold.resolve(2))?;
    }

    let reference = read_samples(&args.reference)?;
    let observed = read_samples(&args.observed)?;
    let series = SampleSeries::new(reference, observed)?;
    let outcome = scan(&series, &kernel, &config)?;
    emit(&serde_json::to_string_pretty(&outcome).map_err(Error::from)?)?;
    Ok(if outcome.is_alarm() { EXIT_ALARM } else { EXIT_OK })
}

fn run_mmd(args: &MmdArgs) -> std::result::Result<u8, Failure> {
    let kernel = usage(Kernel::new(args.kernel.kernel, args.kernel.sigma))?;
    let x = read_samples(&args.x)?;
    let y = read_samples(&args.y)?;
    let value = mmd2_unbiased(&x, &y, &kernel)?;
    emit(&format!("{value:?}"))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ExperimentSummary<'a> {
    name: Option<&'a str>,
    seed: u64,
    rows: usize,
    out: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    json: Option<String>,
}

fn run_experiment(args: &ExperimentArgs) -> std::result::Result<u8, Failure> {
    let mut plan = usage(ExperimentPlan::from_path(&args.plan))?;
    if args.seed.is_some() {
        plan.seed = args.seed;
    }
    let table = run_plan(&plan)?;
    let csv = table.to_csv_string()?;
    let json = match &args.json {
        Some(_) => Some(table.to_json_string()?),
        None => None,
    };
    write_atomic(&args.out, csv.as_bytes())?;
    if let (Some(path), Some(text)) = (&args.json, &json) {
        write_atomic(path, text.as_bytes())?;
    }
    log::info!("seed {}", table.seed);
    let summary = ExperimentSummary {
        name: table.name.as_deref(),
        seed: table.seed,
        rows: table.rows.len(),
        out: args.out.display().to_string(),
        json: args.json.as_ref().map(|p| p.display().to_string()),
    };
    emit(&serde_json::to_string(&summary).map_err(Error::from)?)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IntervalRow {
    level: u32,
    start: usize,
    length: usize,
}

fn run_intervals(args: &IntervalsArgs) -> std::result::Result<u8, Failure> {
    let grid = usage(DyadicGrid::new(args.n))?;
    let rows: Vec<IntervalRow> = match (args.base_start, args.base_length) {
        (Some(start), Some(length)) => {
            let base = usage(Interval::try_new(start, length))?;
            if args.levels < 1 {
                return Err(Failure::Usage(Error::invalid("--levels must be at least 1")));
            }
            let family = usage(ExtensionShapes::new(args.levels).family_of(&base, &grid))?;
            family
                .members
                .iter()
                .map(|m| IntervalRow {
                    level: m.round,
                    start: m.interval.start(),
                    length: m.interval.len(),
                })
                .collect()
        }
        _ => grid
            .cells()
            .iter()
            .map(|c| IntervalRow {
                level: c.level,
                start: c.interval.start(),
                length: c.interval.len(),
            })
            .collect(),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(Error::from)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::invalid(format!("csv buffer: {e}")))?;
    let mut out = std::io::stdout().lock();
    out.write_all(&bytes).map_err(Error::from)?;
    out.flush().map_err(Error::from)?;
    Ok(EXIT_OK)
}
