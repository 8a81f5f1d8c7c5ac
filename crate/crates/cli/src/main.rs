//! `maplab`: exact and Monte Carlo face counts of random bipartite maps.
//!
//! Exit status: 0 when every verdict is pass/consistent, 1 on a bound
//! violation, 2 on parse or domain errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use maplab_core::estimate::{
    estimate, reports_to_csv, reports_to_json, reports_to_jsonl, sweep, EstimateReport, McConfig,
    Method, StepAggregates, DEFAULT_ENUM_LIMIT,
};
use maplab_core::map::correspondence_walkthrough;
use maplab_core::process::{run_process_seeded, Variant};
use maplab_core::{Partition, Permutation};

const ENUM_LIMIT_VAR: &str = "MAPLAB_ENUM_LIMIT";

#[derive(Parser)]
#[command(name = "maplab", version, about = "Cycle counts of conjugacy-class products via bipartite maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the expected cycle count for one pair of partitions.
    Estimate(EstimateArgs),
    /// Check the harmonic window for every pair at one n or up to --n-max.
    Verify(RangeArgs),
    /// One report per ordered pair of partitions of n.
    Sweep(RangeArgs),
    /// Per-step JSONL trace of a single process run.
    Trace(TraceArgs),
    /// Print the seven-point map/permutation correspondence.
    Example1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Jsonl,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "exact", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also emit per-step aggregates (mc-A / mc-B) as JSONL on stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, value_parser = parse_partition)]
    alpha: Partition,
    #[arg(long, value_parser = parse_partition)]
    beta: Partition,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RangeArgs {
    /// A single n.
    #[arg(long, conflicts_with = "n_max")]
    n: Option<usize>,
    /// Every n from 1 to this value.
    #[arg(long)]
    n_max: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, value_parser = parse_partition)]
    alpha: Partition,
    #[arg(long, value_parser = parse_partition)]
    beta: Partition,
    /// mc-A or mc-B.
    #[arg(long, default_value = "mc-B", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: maplab_core::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: maplab_core::Error| e.to_string())
}

/// A failure carrying the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<maplab_core::Error> for Failure {
    fn from(e: maplab_core::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn domain(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn enum_limit() -> Result<usize, Failure> {
    match std::env::var(ENUM_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| domain(format!("{ENUM_LIMIT_VAR} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_ENUM_LIMIT),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(reports: &[EstimateReport], format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => reports_to_json(reports),
        Format::Jsonl => reports_to_jsonl(reports),
        Format::Csv => reports_to_csv(reports)?,
    })
}

fn step_lines(steps: &StepAggregates) -> String {
    let mut s = String::new();
    for k in 1..=steps.n {
        let _ = writeln!(
            s,
            r#"{{"k":{k},"mean_faces_added":{},"mean_O_k":{},"freq_b_k":{}}}"#,
            steps.mean_faces(k),
            steps.mean_bad_t(k),
            steps.freq_bad_map(k)
        );
    }
    s
}

fn config(common: &Common) -> McConfig {
    let c = McConfig::new(common.method, common.trials, common.seed);
    if common.trace {
        c.with_steps()
    } else {
        c
    }
}

fn status(reports: &[EstimateReport]) -> u8 {
    if reports.iter().all(|r| r.verdict.is_ok()) {
        0
    } else {
        1
    }
}

fn cmd_estimate(args: &EstimateArgs) -> Result<u8, Failure> {
    let limit = enum_limit()?;
    let report = estimate(&args.alpha, &args.beta, &config(&args.common), limit)?;
    if let Some(steps) = &report.steps {
        eprint!("{}", step_lines(steps));
    }
    let reports = [report];
    emit(&args.common.out, &render(&reports, args.common.format)?)?;
    Ok(status(&reports))
}

fn range_reports(args: &RangeArgs) -> Result<Vec<EstimateReport>, Failure> {
    let limit = enum_limit()?;
    let ns: Vec<usize> = match (args.n, args.n_max) {
        (Some(n), None) => vec![n],
        (None, Some(m)) => (1..=m).collect(),
        _ => return Err(domain("give exactly one of --n or --n-max")),
    };
    let mut reports = Vec::new();
    for n in ns {
        let batch = sweep(n, args.common.method, args.common.trials, args.common.seed, limit)?;
        if args.common.trace {
            // per-step aggregates are not collected by sweep; rerun traced
            for r in &batch {
                if matches!(r.method, Method::McA | Method::McB) {
                    let traced = estimate(&r.alpha, &r.beta, &config(&args.common), limit)?;
                    if let Some(steps) = &traced.steps {
                        eprint!("{}", step_lines(steps));
                    }
                }
            }
        }
        reports.extend(batch);
    }
    Ok(reports)
}

fn cmd_sweep(args: &RangeArgs) -> Result<u8, Failure> {
    let reports = range_reports(args)?;
    emit(&args.common.out, &render(&reports, args.common.format)?)?;
    Ok(status(&reports))
}

fn cmd_verify(args: &RangeArgs) -> Result<u8, Failure> {
    let reports = range_reports(args)?;
    emit(&args.common.out, &render(&reports, args.common.format)?)?;
    let bad: Vec<&EstimateReport> = reports.iter().filter(|r| !r.verdict.is_ok()).collect();
    let total = reports.len();
    if bad.is_empty() {
        eprintln!("PASS {total}/{total}");
    } else {
        for r in &bad {
            eprintln!(
                "violation: alpha={} beta={} method={} mean={} window={}",
                r.alpha, r.beta, r.method, r.mean, r.window
            );
        }
        eprintln!("FAIL {}/{total}", bad.len());
    }
    Ok(status(&reports))
}

fn cmd_trace(args: &TraceArgs) -> Result<u8, Failure> {
    let variant = match args.method {
        Method::McA => Variant::A,
        Method::McB => Variant::B,
        m => return Err(domain(format!("trace needs mc-A or mc-B, got {m}"))),
    };
    let trace = run_process_seeded(&args.alpha, &args.beta, variant, args.seed)?;
    emit(&args.out, &trace.to_jsonl())?;
    Ok(0)
}

fn cmd_example1() -> Result<u8, Failure> {
    let pi = Permutation::parse_cycles(7, "(1)(2 3 5)(4 7 6)")?;
    let lines = correspondence_walkthrough(&"4,3".parse()?, &"3,2,2".parse()?, &pi)?;
    for (label, value) in lines {
        println!("{label} = {value}");
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Example1 => cmd_example1(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
