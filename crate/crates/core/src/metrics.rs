//! Coverage, tracking performance and engagement ratio.
//!
//! Tracking performance is the fraction of target-steps during which at least
//! one agent was inside the target's radius. Engagement is the fraction of
//! agent-steps spent holding a point of attraction.

use thiserror::Error;

use crate::domain::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no steps were counted; the ratio is undefined")]
pub struct ZeroHorizon;

/// Whether any agent lies within `radius` of `target` (boundary inclusive).
pub fn coverage(target: Vec2, agent_positions: &[Vec2], radius: f64) -> bool {
    let r2 = radius * radius;
    agent_positions
        .iter()
        .any(|&p| target.distance_squared(p) <= r2)
}

/// Per-step totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSample {
    /// Number of targets covered.
    pub covered: u32,
    /// Number of agents in tracking state.
    pub engaged: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsAccumulator {
    pub coverage_sum: u64,
    pub engagement_sum: u64,
    pub steps: u64,
    pub series: Option<Vec<StepSample>>,
}

impl MetricsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_series() -> Self {
        Self {
            series: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn record(&mut self, sample: StepSample) {
        self.coverage_sum += u64::from(sample.covered);
        self.engagement_sum += u64::from(sample.engaged);
        self.steps += 1;
        if let Some(series) = &mut self.series {
            series.push(sample);
        }
    }

    /// Folds another accumulator in. Sums add; series concatenate when both
    /// sides keep one and are dropped otherwise.
    pub fn merge(&mut self, other: &MetricsAccumulator) {
        self.coverage_sum += other.coverage_sum;
        self.engagement_sum += other.engagement_sum;
        self.steps += other.steps;
        match (&mut self.series, &other.series) {
            (Some(a), Some(b)) => a.extend_from_slice(b),
            (series, _) => *series = None,
        }
    }

    /// Mean coverage over steps and `n_targets` targets.
    pub fn tracking_performance(&self, n_targets: usize) -> Result<f64, ZeroHorizon> {
        if self.steps == 0 || n_targets == 0 {
            return Err(ZeroHorizon);
        }
        Ok(self.coverage_sum as f64 / (self.steps as f64 * n_targets as f64))
    }

    /// Mean share of `n_agents` agents engaged per step.
    pub fn engagement_ratio(&self, n_agents: usize) -> Result<f64, ZeroHorizon> {
        if self.steps == 0 || n_agents == 0 {
            return Err(ZeroHorizon);
        }
        Ok(self.engagement_sum as f64 / (n_agents as f64 * self.steps as f64))
    }
}
