//! Tracking performance against memory length for an evasive target.
//!
//! `cargo run --release --example memory_comparison -- [horizon]`

use swarmtrack::harness::{default_jobs, mean_sd, run_configs};
use swarmtrack::SwarmConfig;

fn main() {
    let horizon = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().expect("horizon"));
    let memories = [0u64, 5, 20, 100, 500, 2000];
    let seeds = [1u64, 2, 3];

    let configs: Vec<SwarmConfig> = memories
        .iter()
        .flat_map(|&memory_length| {
            seeds.iter().map(move |&seed| SwarmConfig {
                memory_length,
                seed,
                horizon,
                ..SwarmConfig::default()
            })
        })
        .collect();
    let results = run_configs(&configs, default_jobs());

    println!("{:>6} {:>8} {:>8} {:>8}", "t_mem", "xi", "sd", "theta");
    for (m, chunk) in memories.iter().zip(results.chunks(seeds.len())) {
        let xi: Vec<f64> = chunk.iter().map(|r| r.as_ref().expect("run").xi).collect();
        let theta: Vec<f64> = chunk
            .iter()
            .map(|r| r.as_ref().expect("run").theta)
            .collect();
        let (mean, sd) = mean_sd(&xi);
        println!("{m:>6} {mean:>8.4} {sd:>8.4} {:>8.4}", mean_sd(&theta).0);
    }
}
