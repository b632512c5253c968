//! Command-line front end: single runs, sweeps and sweep summaries.
//!
//! Exit codes: 0 success, 1 invalid config or spec, 2 runtime failure.

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use swarmtrack::harness::{self, HarnessError, SweepSpec};
use swarmtrack::{run, run_traced, EngineError, SwarmConfig};

#[derive(Parser)]
#[command(
    name = "swarmtrack",
    version,
    about = "Swarm search-and-tracking simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and print a summary CSV row.
    Simulate {
        /// Config file (`key = value` lines); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a config key, e.g. `--set degree=5`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Write the per-step trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Exclude the first W steps from the metrics.
        #[arg(long)]
        warmup: Option<u64>,
    },
    /// Run a parameter grid and write one CSV row per run.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: $SWARMTRACK_JOBS or all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Keep finished rows already in the output and run only the rest.
        #[arg(long)]
        resume: bool,
    },
    /// Aggregate a sweep CSV over seeds.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Config(c) => Failure::Invalid(c.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::Spec(_) => Failure::Invalid(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn simulate(
    config: Option<PathBuf>,
    overrides: Vec<String>,
    trace: Option<PathBuf>,
    seed: Option<u64>,
    warmup: Option<u64>,
) -> Result<(), Failure> {
    let mut cfg = match config {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
            SwarmConfig::from_config_str(&text).map_err(|e| Failure::Invalid(e.to_string()))?
        }
        None => SwarmConfig::default(),
    };
    for o in &overrides {
        cfg.apply_override(o)
            .map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(w) = warmup {
        cfg.warmup = w;
    }
    cfg.validate()
        .map_err(|e| Failure::Invalid(e.to_string()))?;

    let start = Instant::now();
    let result = match trace {
        Some(path) => {
            let file = File::create(&path)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            run_traced(&cfg, BufWriter::new(file))?
        }
        None => run(&cfg)?,
    };
    let wall_ms = start.elapsed().as_millis();
    println!("fingerprint,seed,xi,theta,wall_ms");
    println!(
        "{},{},{},{},{}",
        harness::fingerprint(&cfg),
        cfg.seed,
        result.xi,
        result.theta,
        wall_ms
    );
    if result.zero_horizon {
        eprintln!("warning: zero horizon, no steps counted");
    }
    Ok(())
}

fn sweep(
    spec: PathBuf,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    resume: bool,
) -> Result<(), Failure> {
    let mut spec = SweepSpec::from_file(&spec)?;
    if let Some(j) = jobs {
        spec.jobs = j;
    }
    let out = out.or_else(|| spec.out.clone()).ok_or_else(|| {
        Failure::Invalid("no output path: pass --out or set `out` in the spec".into())
    })?;
    let report = harness::run_sweep(&spec, &out, resume)?;
    eprintln!(
        "{} rows: {} reused, {} executed, {} failed -> {}",
        report.total,
        report.reused,
        report.executed,
        report.failed,
        out.display()
    );
    Ok(())
}

fn summarize(input: PathBuf, out: PathBuf) -> Result<(), Failure> {
    let file =
        File::open(&input).map_err(|e| Failure::Runtime(format!("{}: {e}", input.display())))?;
    let summary = harness::summarize(io::BufReader::new(file))?;
    let dest =
        File::create(&out).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
    harness::write_summary(&summary, BufWriter::new(dest))?;
    if summary.skipped > 0 {
        eprintln!(
            "warning: skipped {} malformed or failed rows",
            summary.skipped
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate {
            config,
            overrides,
            trace,
            seed,
            warmup,
        } => simulate(config, overrides, trace, seed, warmup),
        Command::Sweep {
            spec,
            out,
            jobs,
            resume,
        } => sweep(spec, out, jobs, resume),
        Command::Summarize { input, out } => summarize(input, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
