//! The simulation loop.
//!
//! Each step, in order: agents detect targets inside the radius, the k-nearest
//! graph is rebuilt, every agent resolves its point of attraction from its own
//! and its neighbors' sightings, adapts its repulsion strength, composes
//! attraction and repulsion, normalizes to the agent speed and moves. Targets
//! then move against the agents' new positions and the metrics observe the
//! post-step state.
//!
//! Randomness comes from independent ChaCha8 streams derived from the seed:
//! one for initial agent placement, one for everything target-related, and one
//! per agent for its per-step attraction draw.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domain::{AgentState, ConfigError, SwarmConfig, TargetState, UpdateMode, Vec2};
use crate::metrics::{coverage, MetricsAccumulator, StepSample};
use crate::network::{k_nearest, k_nearest_of};
use crate::strategy::{
    adapt_repulsion_strength, attraction_velocity, record_detection, repulsion_velocity,
    resolve_attraction,
};
use crate::targets::{
    clamp_to_arena, place_targets, random_point, separate_targets, step_target, PlacementError,
};
use crate::trace::TraceWriter;

const PLACEMENT_STREAM: u64 = 0;
const TARGET_STREAM: u64 = 1;
const FIRST_AGENT_STREAM: u64 = 2;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error("non-finite state at step {step}: {detail}")]
    NonFinite { step: u64, detail: String },
    #[error("trace output failed: {0}")]
    Trace(#[from] std::io::Error),
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// The per-agent random stream used for agent `index` under `seed`.
pub fn agent_stream(seed: u64, index: usize) -> ChaCha8Rng {
    stream(seed, FIRST_AGENT_STREAM + index as u64)
}

/// Complete simulation state.
#[derive(Debug, Clone)]
pub struct WorldState {
    /// Number of completed steps.
    pub t: u64,
    pub agents: Vec<AgentState>,
    pub targets: Vec<TargetState>,
    /// One stream per agent, permuted together with `agents`.
    pub agent_rngs: Vec<ChaCha8Rng>,
    pub target_rng: ChaCha8Rng,
}

impl WorldState {
    pub fn agent_positions(&self) -> Vec<Vec2> {
        self.agents.iter().map(|a| a.position).collect()
    }

    fn check_finite(&self) -> Result<(), EngineError> {
        for (i, a) in self.agents.iter().enumerate() {
            if !(a.position.is_finite() && a.velocity.is_finite() && a.repulsion.is_finite()) {
                return Err(EngineError::NonFinite {
                    step: self.t,
                    detail: format!("agent {i}: {a:?}"),
                });
            }
        }
        for (m, o) in self.targets.iter().enumerate() {
            if !(o.position.is_finite() && o.velocity.is_finite()) {
                return Err(EngineError::NonFinite {
                    step: self.t,
                    detail: format!("target {m}: {o:?}"),
                });
            }
        }
        Ok(())
    }
}

/// Builds the initial world: agents uniform in the arena, at rest, with
/// maximal repulsion and empty memory; targets placed apart.
pub fn init_world(cfg: &SwarmConfig) -> Result<WorldState, EngineError> {
    cfg.validate()?;
    let mut placement = stream(cfg.seed, PLACEMENT_STREAM);
    let agents = (0..cfg.n_agents)
        .map(|_| {
            AgentState::new(
                random_point(&mut placement, cfg.arena_side),
                cfg.repulsion_max,
            )
        })
        .collect();
    let mut target_rng = stream(cfg.seed, TARGET_STREAM);
    let targets = place_targets(cfg.n_targets, &mut target_rng, cfg)?;
    let agent_rngs = (0..cfg.n_agents)
        .map(|i| agent_stream(cfg.seed, i))
        .collect();
    Ok(WorldState {
        t: 0,
        agents,
        targets,
        agent_rngs,
        target_rng,
    })
}

/// Position of the nearest target within the radius of `agent`, ties to the
/// lower target index.
fn detect(agent: Vec2, targets: &[TargetState], radius: f64) -> Option<Vec2> {
    let r2 = radius * radius;
    let mut best: Option<(f64, Vec2)> = None;
    for t in targets {
        let d2 = agent.distance_squared(t.position);
        if d2 <= r2 && best.is_none_or(|(b, _)| d2 < b) {
            best = Some((d2, t.position));
        }
    }
    best.map(|(_, p)| p)
}

/// Clamps into the arena and zeroes any velocity component pointing into a wall that was hit.
fn integrate(position: Vec2, velocity: Vec2, side: f64) -> (Vec2, Vec2) {
    let moved = position + velocity;
    let clamped = clamp_to_arena(moved, side);
    let mut v = velocity;
    if clamped.x != moved.x {
        v.x = 0.0;
    }
    if clamped.y != moved.y {
        v.y = 0.0;
    }
    (clamped, v)
}

fn normalize_speed(v: Vec2, speed: f64) -> Vec2 {
    let n = v.norm();
    if n > 0.0 {
        v * (speed / n)
    } else {
        v
    }
}

/// What an agent reads about the rest of the swarm during its update.
struct View<'a> {
    now: u64,
    records: &'a [Option<crate::domain::Sighting>],
    positions: &'a [Vec2],
}

/// Agent `i`'s full update given its neighbor list. Returns the new agent state.
fn update_agent(
    agent: &AgentState,
    index: usize,
    detected: Option<Vec2>,
    neighbors: &[usize],
    view: &View<'_>,
    rng: &mut ChaCha8Rng,
    cfg: &SwarmConfig,
) -> AgentState {
    let View {
        now,
        records,
        positions,
    } = *view;
    let (resolution, memory) = resolve_attraction(
        agent.memory,
        detected,
        neighbors.iter().map(|&j| records[j]),
        now,
        cfg.memory_length,
    );
    let tracking = resolution.is_tracking();
    let repulsion = adapt_repulsion_strength(agent.repulsion, tracking, cfg);
    let r: f64 = rng.gen();
    let here = agent.position;
    let v_att = attraction_velocity(
        agent.velocity,
        here,
        resolution.point_or(here),
        cfg.inertia,
        cfg.social_weight,
        r,
    );
    let v_rep = repulsion_velocity(
        here,
        index,
        neighbors.iter().map(|&j| (j, positions[j])),
        repulsion,
        cfg.repulsion_exponent,
    );
    let v = normalize_speed(v_att + v_rep, cfg.agent_speed);
    let (position, velocity) = integrate(here, v, cfg.arena_side);
    AgentState {
        position,
        velocity,
        repulsion,
        memory,
        tracking,
    }
}

fn step_sync(world: &mut WorldState, cfg: &SwarmConfig) {
    let now = world.t;
    let rho = cfg.radius();
    let positions = world.agent_positions();
    let detected: Vec<Option<Vec2>> = positions
        .iter()
        .map(|&p| detect(p, &world.targets, rho))
        .collect();
    let records: Vec<_> = world
        .agents
        .iter()
        .zip(&detected)
        .map(|(a, &d)| record_detection(a.memory, d, now))
        .collect();
    let table = k_nearest(&positions, cfg.degree).expect("degree validated against n_agents");
    let view = View {
        now,
        records: &records,
        positions: &positions,
    };

    let next: Vec<AgentState> = world
        .agents
        .iter()
        .zip(world.agent_rngs.iter_mut())
        .enumerate()
        .map(|(i, (agent, rng))| {
            update_agent(agent, i, detected[i], table.neighbors(i), &view, rng, cfg)
        })
        .collect();
    world.agents = next;
}

fn step_async(world: &mut WorldState, cfg: &SwarmConfig) {
    let now = world.t;
    let rho = cfg.radius();
    let mut positions = world.agent_positions();
    let mut records: Vec<_> = world.agents.iter().map(|a| a.memory).collect();
    for i in 0..world.agents.len() {
        let detected = detect(positions[i], &world.targets, rho);
        records[i] = record_detection(records[i], detected, now);
        let neighbors =
            k_nearest_of(&positions, i, cfg.degree).expect("degree validated against n_agents");
        let updated = update_agent(
            &world.agents[i],
            i,
            detected,
            &neighbors,
            &View {
                now,
                records: &records,
                positions: &positions,
            },
            &mut world.agent_rngs[i],
            cfg,
        );
        positions[i] = updated.position;
        records[i] = updated.memory;
        world.agents[i] = updated;
    }
}

/// Advances the world by one step and returns the post-step metric sample.
pub fn step(world: &mut WorldState, cfg: &SwarmConfig) -> Result<StepSample, EngineError> {
    match cfg.update_mode {
        UpdateMode::Sync => step_sync(world, cfg),
        UpdateMode::Async => step_async(world, cfg),
    }

    let positions = world.agent_positions();
    let moved: Vec<TargetState> = world
        .targets
        .iter()
        .enumerate()
        .map(|(m, t)| {
            step_target(
                t,
                world.agents.len() + m,
                &positions,
                &mut world.target_rng,
                cfg,
            )
        })
        .collect();
    world.targets = moved;
    if world.targets.len() > 1 {
        separate_targets(&mut world.targets, &mut world.target_rng, cfg);
    }
    world.t += 1;
    world.check_finite()?;

    Ok(sample(world, cfg.radius()))
}

/// Metric sample of the current state.
pub fn sample(world: &WorldState, radius: f64) -> StepSample {
    let positions = world.agent_positions();
    let covered = world
        .targets
        .iter()
        .filter(|t| coverage(t.position, &positions, radius))
        .count() as u32;
    let engaged = world.agents.iter().filter(|a| a.tracking).count() as u32;
    StepSample { covered, engaged }
}

/// Outcome of a full run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Tracking performance; 0 when no steps were counted.
    pub xi: f64,
    /// Engagement ratio; 0 when no steps were counted.
    pub theta: f64,
    /// Set when no steps were counted and `xi`/`theta` are placeholders.
    pub zero_horizon: bool,
    pub metrics: MetricsAccumulator,
}

impl RunResult {
    fn from_metrics(metrics: MetricsAccumulator, cfg: &SwarmConfig) -> Self {
        match (
            metrics.tracking_performance(cfg.n_targets),
            metrics.engagement_ratio(cfg.n_agents),
        ) {
            (Ok(xi), Ok(theta)) => RunResult {
                xi,
                theta,
                zero_horizon: false,
                metrics,
            },
            _ => RunResult {
                xi: 0.0,
                theta: 0.0,
                zero_horizon: true,
                metrics,
            },
        }
    }
}

/// Stepping driver that owns a world and its metrics.
pub struct Simulation {
    cfg: SwarmConfig,
    world: WorldState,
    metrics: MetricsAccumulator,
}

impl Simulation {
    pub fn new(cfg: SwarmConfig) -> Result<Self, EngineError> {
        let world = init_world(&cfg)?;
        Ok(Self {
            cfg,
            world,
            metrics: MetricsAccumulator::new(),
        })
    }

    /// Starts from an explicit world, e.g. a hand-built or permuted one.
    pub fn from_world(cfg: SwarmConfig, world: WorldState) -> Result<Self, EngineError> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            world,
            metrics: MetricsAccumulator::new(),
        })
    }

    /// Keeps the per-step `(covered, engaged)` series.
    pub fn with_series(mut self) -> Self {
        self.metrics.series = Some(Vec::new());
        self
    }

    pub fn config(&self) -> &SwarmConfig {
        &self.cfg
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn metrics(&self) -> &MetricsAccumulator {
        &self.metrics
    }

    /// One step; the sample counts toward the metrics once past the warm-up.
    pub fn step(&mut self) -> Result<StepSample, EngineError> {
        let sample = step(&mut self.world, &self.cfg)?;
        if self.world.t > self.cfg.warmup {
            self.metrics.record(sample);
        }
        Ok(sample)
    }

    /// Steps until the horizon, optionally writing a trace row per step.
    pub fn run_to_end<W: Write>(
        mut self,
        mut trace: Option<&mut TraceWriter<W>>,
    ) -> Result<RunResult, EngineError> {
        while self.world.t < self.cfg.horizon {
            self.step()?;
            if let Some(tw) = trace.as_deref_mut() {
                tw.write_step(&self.world, self.cfg.radius())?;
            }
        }
        if let Some(tw) = trace {
            tw.flush()?;
        }
        Ok(RunResult::from_metrics(self.metrics, &self.cfg))
    }
}

/// Runs `cfg` from its initial world to the horizon.
pub fn run(cfg: &SwarmConfig) -> Result<RunResult, EngineError> {
    Simulation::new(cfg.clone())?.run_to_end::<std::io::Sink>(None)
}

/// Like [`run`], also writing a CSV trace and keeping the per-step series.
pub fn run_traced<W: Write>(cfg: &SwarmConfig, out: W) -> Result<RunResult, EngineError> {
    let sim = Simulation::new(cfg.clone())?.with_series();
    let mut trace = TraceWriter::new(out, cfg.n_agents, cfg.n_targets)?;
    sim.run_to_end(Some(&mut trace))
}
