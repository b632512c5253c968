//! One run with the default parameters at a shortened horizon.
//!
//! `cargo run --release --example single_run -- [horizon] [seed]`

use swarmtrack::{run, SwarmConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let horizon = args.next().map_or(20_000, |s| s.parse().expect("horizon"));
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));

    let cfg = SwarmConfig {
        horizon,
        seed,
        ..SwarmConfig::default()
    };
    print!("{}", cfg.to_config_string());
    let result = run(&cfg).expect("run");
    println!("\ntracking performance  {:.4}", result.xi);
    println!("engagement ratio      {:.4}", result.theta);
}
