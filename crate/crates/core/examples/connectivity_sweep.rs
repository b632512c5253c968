//! Tracking performance and engagement across network degrees, evasive and
//! non-evasive targets side by side, with the best degree of each.
//!
//! `cargo run --release --example connectivity_sweep -- [horizon]`

use swarmtrack::harness::{argmax_degree, default_jobs, mean_sd, run_configs};
use swarmtrack::{SwarmConfig, TargetPolicy};

fn main() {
    let horizon = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().expect("horizon"));
    let degrees = [2usize, 5, 10, 15, 20, 30, 40, 49];
    let seeds = [1u64, 2];

    for policy in [TargetPolicy::Evasive, TargetPolicy::NonEvasive] {
        let configs: Vec<SwarmConfig> = degrees
            .iter()
            .flat_map(|&degree| {
                seeds.iter().map(move |&seed| SwarmConfig {
                    degree,
                    seed,
                    horizon,
                    target_policy: policy,
                    ..SwarmConfig::default()
                })
            })
            .collect();
        let results = run_configs(&configs, default_jobs());

        println!("{policy} target");
        let mut curve = Vec::new();
        for (&k, chunk) in degrees.iter().zip(results.chunks(seeds.len())) {
            let xi: Vec<f64> = chunk.iter().map(|r| r.as_ref().expect("run").xi).collect();
            let theta: Vec<f64> = chunk
                .iter()
                .map(|r| r.as_ref().expect("run").theta)
                .collect();
            let (mean, sd) = mean_sd(&xi);
            println!(
                "  k={k:<3} xi {mean:.4} +- {sd:.4}  theta {:.4}",
                mean_sd(&theta).0
            );
            curve.push((k, mean));
        }
        println!("  k* = {}\n", argmax_degree(&curve).unwrap());
    }
}
