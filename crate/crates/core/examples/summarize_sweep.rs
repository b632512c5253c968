//! Builds a sweep grid in code, runs it to a CSV (resumable) and aggregates
//! the rows over seeds.
//!
//! `cargo run --release --example summarize_sweep -- [out.csv]`

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use swarmtrack::harness::{run_sweep, summarize, SweepSpec};
use swarmtrack::SwarmConfig;

fn main() {
    let out = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "sweep.csv".to_string()),
    );
    let mut spec = SweepSpec::new(SwarmConfig {
        horizon: 5_000,
        ..SwarmConfig::default()
    });
    spec.degree = vec![5, 20, 49];
    spec.n_targets = vec![1, 2];
    spec.seeds = vec![1, 2, 3];

    let report = run_sweep(&spec, &out, true).expect("sweep");
    println!(
        "{} rows ({} reused, {} run, {} failed) in {}",
        report.total,
        report.reused,
        report.executed,
        report.failed,
        out.display()
    );

    let summary = summarize(BufReader::new(File::open(&out).expect("open"))).expect("summarize");
    println!(
        "{:>2} {:>3} {:>4} {:>8} {:>8} {:>3}",
        "J", "k", "runs", "xi", "sd", "k*"
    );
    for r in &summary.rows {
        println!(
            "{:>2} {:>3} {:>4} {:>8.4} {:>8.4} {:>3}",
            r.n_targets, r.degree, r.runs, r.xi_mean, r.xi_sd, r.k_star
        );
    }
}
