//! Target motion: random-waypoint roaming and the evasive policy layered on
//! top of it.
//!
//! An evasive target roams until an agent comes within its radius. While in
//! contact it flees along the repulsion direction of the in-radius agents at
//! full speed. After `evasion_limit` consecutive contact steps it commits to
//! its current heading for `evasion_duration` steps, bouncing off walls, then
//! resumes roaming toward a fresh waypoint. Shaking off contact before that
//! also sends it toward a fresh waypoint.

use rand::Rng;
use thiserror::Error;

use crate::domain::{SwarmConfig, TargetMode, TargetPolicy, TargetState, Vec2};
use crate::strategy::repulsion_velocity;

/// Rejected draws tolerated before placement gives up.
pub const MAX_PLACEMENT_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("could not place {requested} targets {min_separation} apart in a {arena_side}x{arena_side} arena after {rejections} rejected draws")]
pub struct PlacementError {
    pub requested: usize,
    pub min_separation: f64,
    pub arena_side: f64,
    pub rejections: usize,
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, side: f64) -> Vec2 {
    Vec2::new(rng.gen_range(0.0..=side), rng.gen_range(0.0..=side))
}

pub(crate) fn clamp_to_arena(p: Vec2, side: f64) -> Vec2 {
    Vec2::new(p.x.clamp(0.0, side), p.y.clamp(0.0, side))
}

/// Uniform placement with every pair at least `2ρ` apart.
pub fn place_targets<R: Rng + ?Sized>(
    count: usize,
    rng: &mut R,
    cfg: &SwarmConfig,
) -> Result<Vec<TargetState>, PlacementError> {
    let side = cfg.arena_side;
    let min_sep = 2.0 * cfg.radius();
    let mut placed: Vec<TargetState> = Vec::with_capacity(count);
    let mut rejections = 0;
    while placed.len() < count {
        let candidate = random_point(rng, side);
        if placed
            .iter()
            .all(|t| t.position.distance(candidate) >= min_sep)
        {
            let waypoint = random_point(rng, side);
            placed.push(TargetState::new(candidate, waypoint, cfg.target_policy));
        } else {
            rejections += 1;
            if rejections > MAX_PLACEMENT_REJECTIONS {
                return Err(PlacementError {
                    requested: count,
                    min_separation: min_sep,
                    arena_side: side,
                    rejections,
                });
            }
        }
    }
    Ok(placed)
}

/// Straight-line move toward the waypoint, drawing a new waypoint on arrival.
pub fn nonevasive_step<R: Rng + ?Sized>(
    target: &TargetState,
    rng: &mut R,
    cfg: &SwarmConfig,
) -> TargetState {
    let speed = cfg.target_speed;
    let mut next = target.clone();
    if next.position.distance(next.waypoint) < speed {
        next.waypoint = random_point(rng, cfg.arena_side);
    }
    let to_waypoint = next.waypoint - next.position;
    let dist = to_waypoint.norm();
    next.velocity = if dist > 0.0 {
        to_waypoint * (speed.min(dist) / dist)
    } else {
        Vec2::ZERO
    };
    next.position = clamp_to_arena(next.position + next.velocity, cfg.arena_side);
    next.mode = TargetMode::Roam;
    next
}

/// Evasive policy step. `agent_positions` are the agents' positions after
/// they moved this step; `target_id` only seeds the direction used when an
/// agent sits exactly on the target.
pub fn evasive_step<R: Rng + ?Sized>(
    target: &TargetState,
    target_id: usize,
    agent_positions: &[Vec2],
    rng: &mut R,
    cfg: &SwarmConfig,
) -> TargetState {
    let side = cfg.arena_side;
    let speed = cfg.target_speed;

    if target.evade_remaining > 0 {
        let mut next = target.clone();
        let moved = next.position + next.velocity;
        next.position = clamp_to_arena(moved, side);
        if moved.x < 0.0 || moved.x > side {
            next.velocity.x = -next.velocity.x;
        }
        if moved.y < 0.0 || moved.y > side {
            next.velocity.y = -next.velocity.y;
        }
        next.evade_remaining -= 1;
        next.mode = TargetMode::Sprint;
        if next.evade_remaining == 0 {
            next.contact_streak = 0;
            next.waypoint = random_point(rng, side);
        }
        return next;
    }

    let rho = cfg.radius();
    let origin = target.position;
    let mut pursuers: Vec<(f64, usize, Vec2)> = agent_positions
        .iter()
        .enumerate()
        .map(|(i, &p)| (origin.distance(p), i, p))
        .filter(|&(d, _, _)| d <= rho)
        .collect();
    // summation order by distance keeps the result independent of agent labels
    pursuers.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    if pursuers.is_empty() {
        let mut resumed = target.clone();
        if target.contact_streak > 0 {
            // the old waypoint may lie behind the pursuer it just shook off
            resumed.waypoint = random_point(rng, side);
        }
        let mut next = nonevasive_step(&resumed, rng, cfg);
        next.contact_streak = 0;
        return next;
    }

    let push = repulsion_velocity(
        origin,
        target_id,
        pursuers.into_iter().map(|(_, i, p)| (i, p)),
        rho,
        cfg.repulsion_exponent,
    );
    let heading = push.normalized().or_else(|| target.velocity.normalized());
    let mut next = target.clone();
    next.velocity = heading.map_or(Vec2::ZERO, |h| h * speed);
    next.position = clamp_to_arena(origin + next.velocity, side);
    next.contact_streak += 1;
    next.mode = TargetMode::Evade;
    if next.contact_streak >= cfg.evasion_limit {
        next.evade_remaining = cfg.evasion_duration;
    }
    next
}

/// Advances one target under its own policy.
pub fn step_target<R: Rng + ?Sized>(
    target: &TargetState,
    target_id: usize,
    agent_positions: &[Vec2],
    rng: &mut R,
    cfg: &SwarmConfig,
) -> TargetState {
    match target.policy {
        TargetPolicy::NonEvasive => nonevasive_step(target, rng, cfg),
        TargetPolicy::Evasive => evasive_step(target, target_id, agent_positions, rng, cfg),
    }
}

/// When two targets drift within `2ρ` of each other, the later one of the pair
/// is sent toward a fresh waypoint.
pub fn separate_targets<R: Rng + ?Sized>(
    targets: &mut [TargetState],
    rng: &mut R,
    cfg: &SwarmConfig,
) {
    let min_sep = 2.0 * cfg.radius();
    for b in 1..targets.len() {
        let crowded = (0..b).any(|a| targets[a].position.distance(targets[b].position) < min_sep);
        if crowded {
            targets[b].waypoint = random_point(rng, cfg.arena_side);
        }
    }
}
