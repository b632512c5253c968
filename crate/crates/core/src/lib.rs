//! Decentralized swarm search and tracking of fast, possibly evasive targets.
//!
//! Agents combine a PSO-style pull toward the freshest known target sighting
//! (their own or one relayed over a k-nearest communication graph) with a
//! pairwise repulsion whose strength adapts to whether the agent is tracking.
//! Sightings expire after a configurable memory length. The crate provides the
//! simulation engine, the tracking and engagement metrics, a CSV trace format
//! and a parallel sweep harness.
//!
//! ```no_run
//! use swarmtrack::{run, SwarmConfig};
//!
//! let cfg = SwarmConfig { degree: 10, horizon: 20_000, ..SwarmConfig::default() };
//! let result = run(&cfg).unwrap();
//! println!("tracking {:.3}  engagement {:.3}", result.xi, result.theta);
//! ```

pub mod domain;
pub mod engine;
pub mod harness;
pub mod metrics;
pub mod network;
pub mod strategy;
pub mod targets;
pub mod trace;

pub use domain::{
    AgentState, ConfigError, Sighting, SwarmConfig, TargetMode, TargetPolicy, TargetState,
    UpdateMode, Vec2,
};
pub use engine::{
    init_world, run, run_traced, step, EngineError, RunResult, Simulation, WorldState,
};
pub use metrics::{MetricsAccumulator, StepSample};
