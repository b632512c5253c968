//! Starts from a hand-placed world instead of a random one: a ring of agents
//! around a stationary target, stepped with and without memory.

use std::f64::consts::TAU;

use swarmtrack::{
    init_world, AgentState, Simulation, SwarmConfig, TargetPolicy, TargetState, Vec2,
};

fn main() {
    let base = SwarmConfig {
        n_agents: 12,
        degree: 3,
        target_speed: 0.0,
        target_policy: TargetPolicy::NonEvasive,
        horizon: 3_000,
        seed: 1,
        ..SwarmConfig::default()
    };
    let target = Vec2::new(12.5, 12.5);

    for memory_length in [0, 20] {
        let cfg = SwarmConfig {
            memory_length,
            ..base.clone()
        };
        let mut world = init_world(&cfg).expect("valid config");
        world.agents = (0..cfg.n_agents)
            .map(|i| {
                let angle = TAU * i as f64 / cfg.n_agents as f64;
                let p = target + Vec2::new(angle.cos(), angle.sin()) * 3.0;
                AgentState::new(p, cfg.repulsion_max)
            })
            .collect();
        world.agents[0].position = target;
        world.targets = vec![TargetState::new(target, target, cfg.target_policy)];

        let result = Simulation::from_world(cfg, world)
            .expect("valid config")
            .run_to_end::<std::io::Sink>(None)
            .expect("run");
        println!(
            "t_mem {memory_length:>2}: xi {:.4}  theta {:.4}",
            result.xi, result.theta
        );
    }
}
