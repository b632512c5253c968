//! Shared value types: geometry, configuration, agent and target state.

mod config;
mod vec2;

pub(crate) use config::key_values;
pub use config::{ConfigError, SwarmConfig, TargetPolicy, UpdateMode};
pub use vec2::Vec2;

/// A remembered target position together with the step it was observed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sighting {
    pub point: Vec2,
    pub time: u64,
}

impl Sighting {
    pub fn new(point: Vec2, time: u64) -> Self {
        Self { point, time }
    }

    /// A sighting is discarded once `time + memory_length < now`.
    pub fn is_fresh(&self, now: u64, memory_length: u64) -> bool {
        self.time.saturating_add(memory_length) >= now
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub position: Vec2,
    pub velocity: Vec2,
    /// Current repulsion strength, kept within the configured bounds.
    pub repulsion: f64,
    /// Last direct detection. Never overwritten by relayed information.
    pub memory: Option<Sighting>,
    /// Whether the agent held a usable point of attraction on its last update.
    pub tracking: bool,
}

impl AgentState {
    pub fn new(position: Vec2, repulsion: f64) -> Self {
        Self {
            position,
            velocity: Vec2::ZERO,
            repulsion,
            memory: None,
            tracking: false,
        }
    }
}

/// Which rule moved a target on its last step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMode {
    /// Heading for a waypoint.
    Roam,
    /// Pushed away from agents inside its radius.
    Evade,
    /// Committed straight-line escape.
    Sprint,
}

impl TargetMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetMode::Roam => "roam",
            TargetMode::Evade => "evade",
            TargetMode::Sprint => "sprint",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    pub position: Vec2,
    /// Commanded velocity of the last step; its norm never exceeds the target speed.
    pub velocity: Vec2,
    pub waypoint: Vec2,
    /// Consecutive steps with at least one agent inside the radius.
    pub contact_streak: u32,
    /// Sprint steps still to run.
    pub evade_remaining: u32,
    pub policy: TargetPolicy,
    pub mode: TargetMode,
}

impl TargetState {
    pub fn new(position: Vec2, waypoint: Vec2, policy: TargetPolicy) -> Self {
        Self {
            position,
            velocity: Vec2::ZERO,
            waypoint,
            contact_streak: 0,
            evade_remaining: 0,
            policy,
            mode: TargetMode::Roam,
        }
    }
}
