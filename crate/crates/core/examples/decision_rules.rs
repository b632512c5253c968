//! The per-agent rules in isolation: which sighting wins, how strong the pull
//! and the push are, and how the repulsion scale adapts.

use swarmtrack::strategy::{
    adapt_repulsion_strength, attraction_velocity, repulsion_velocity, resolve_attraction,
    AttractionSource,
};
use swarmtrack::{Sighting, SwarmConfig, Vec2};

fn main() {
    let cfg = SwarmConfig::default();
    let now = 100;

    // own sighting from step 90, neighbors saw the target at 95 and 70
    let own = Some(Sighting::new(Vec2::new(3.0, 3.0), 90));
    let relayed = [
        Some(Sighting::new(Vec2::new(4.0, 2.0), 95)),
        None,
        Some(Sighting::new(Vec2::new(9.0, 9.0), 70)),
    ];
    let (res, memory) = resolve_attraction(own, None, relayed, now, cfg.memory_length);
    assert_eq!(res.source, AttractionSource::NeighborRelay);
    println!(
        "resolved {:?} from {:?}; memory kept: {memory:?}",
        res.point, res.source
    );

    // after the memory window everything is stale
    let (res, memory) = resolve_attraction(own, None, relayed, now + 30, cfg.memory_length);
    println!("30 steps later: {:?}, memory {memory:?}", res.source);

    let x = Vec2::new(1.0, 1.0);
    let pull = attraction_velocity(
        Vec2::new(0.1, 0.0),
        x,
        Vec2::new(4.0, 2.0),
        cfg.inertia,
        cfg.social_weight,
        0.5,
    );
    println!("pull toward the sighting: {pull:?}");

    for r in [1.0, 2.0, 4.0] {
        let push = repulsion_velocity(
            Vec2::ZERO,
            0,
            [(1, Vec2::new(r, 0.0))],
            cfg.repulsion_min,
            cfg.repulsion_exponent,
        );
        println!("push from a neighbor at distance {r}: {:.4}", push.norm());
    }

    let mut a = cfg.repulsion_max;
    let mut steps = 0;
    while a > cfg.repulsion_min {
        a = adapt_repulsion_strength(a, true, &cfg);
        steps += 1;
    }
    println!("tracking shrinks the repulsion scale from max to min in {steps} steps");
}
