//! Writes a per-step trace and recomputes the metrics from it.
//!
//! `cargo run --release --example trace_replay -- [trace.csv]`

use std::fs::File;
use std::io::{BufReader, BufWriter};

use swarmtrack::trace::replay;
use swarmtrack::{run_traced, SwarmConfig};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "trace.csv".to_string());
    let cfg = SwarmConfig {
        horizon: 2_000,
        n_targets: 2,
        warmup: 200,
        seed: 42,
        ..SwarmConfig::default()
    };
    let result = run_traced(
        &cfg,
        BufWriter::new(File::create(&path).expect("create trace")),
    )
    .expect("run");

    let rep = replay(
        BufReader::new(File::open(&path).expect("open trace")),
        cfg.warmup,
    )
    .expect("replay");
    let xi = rep
        .metrics
        .tracking_performance(rep.n_targets)
        .expect("steps");
    let theta = rep.metrics.engagement_ratio(rep.n_agents).expect("steps");
    println!("run:    xi {:.6}  theta {:.6}", result.xi, result.theta);
    println!(
        "replay: xi {xi:.6}  theta {theta:.6}  ({} steps from {path})",
        rep.metrics.steps
    );
    assert_eq!((xi, theta), (result.xi, result.theta));
}
