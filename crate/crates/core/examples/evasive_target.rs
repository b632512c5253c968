//! Steps a swarm chasing one evasive target and reports how long the target
//! spends roaming, fleeing and sprinting, plus its longest uncovered stretch.

use swarmtrack::{Simulation, SwarmConfig, TargetMode};

fn main() {
    let cfg = SwarmConfig {
        horizon: 10_000,
        seed: 5,
        ..SwarmConfig::default()
    };
    let mut sim = Simulation::new(cfg.clone()).expect("valid config");

    let (mut roam, mut evade, mut sprint) = (0u64, 0u64, 0u64);
    let (mut gap, mut longest_gap, mut sprints) = (0u64, 0u64, 0u64);
    let mut last = TargetMode::Roam;
    for _ in 0..cfg.horizon {
        let sample = sim.step().expect("finite state");
        let mode = sim.world().targets[0].mode;
        match mode {
            TargetMode::Roam => roam += 1,
            TargetMode::Evade => evade += 1,
            TargetMode::Sprint => sprint += 1,
        }
        if mode == TargetMode::Sprint && last != TargetMode::Sprint {
            sprints += 1;
        }
        last = mode;
        gap = if sample.covered == 0 { gap + 1 } else { 0 };
        longest_gap = longest_gap.max(gap);
    }

    let pct = |n: u64| 100.0 * n as f64 / cfg.horizon as f64;
    println!(
        "roam {:.1}%  evade {:.1}%  sprint {:.1}%",
        pct(roam),
        pct(evade),
        pct(sprint)
    );
    println!("{sprints} sprints, longest uncovered stretch {longest_gap} steps");
    let m = sim.metrics();
    println!(
        "xi {:.4}  theta {:.4}",
        m.tracking_performance(cfg.n_targets).unwrap(),
        m.engagement_ratio(cfg.n_agents).unwrap()
    );
}
