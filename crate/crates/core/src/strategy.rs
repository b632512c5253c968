//! Per-agent decision rule: where to go (point of attraction with memory),
//! how hard to pull toward it, and how hard to push away from neighbors.

use crate::domain::{Sighting, SwarmConfig, Vec2};

/// Separations below this are treated as coincident.
pub const COINCIDENT_EPS: f64 = 1e-9;
/// Prefactor used for coincident pairs in place of an unbounded value.
pub const COINCIDENT_PREFACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractionSource {
    SelfDetection,
    NeighborRelay,
    None,
}

/// Outcome of point-of-attraction resolution. `point` is `None` exactly when
/// `source` is [`AttractionSource::None`]; the caller then uses the agent's own
/// position so that the attraction term vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractionResolution {
    pub point: Option<Vec2>,
    pub source: AttractionSource,
}

impl AttractionResolution {
    pub const NONE: AttractionResolution = AttractionResolution {
        point: None,
        source: AttractionSource::None,
    };

    /// Tracking state: an agent tracks iff it holds a point of attraction.
    pub fn is_tracking(&self) -> bool {
        self.point.is_some()
    }

    /// The point to steer toward, falling back to `here`.
    pub fn point_or(&self, here: Vec2) -> Vec2 {
        self.point.unwrap_or(here)
    }
}

/// Stores a fresh detection in memory; without one, memory is unchanged.
pub fn record_detection(
    memory: Option<Sighting>,
    detected: Option<Vec2>,
    now: u64,
) -> Option<Sighting> {
    match detected {
        Some(point) => Some(Sighting::new(point, now)),
        None => memory,
    }
}

/// Most recent sighting held by any neighbor. `neighbor_records` must be in
/// neighbor-list order (nearest first); equal timestamps go to the earlier entry.
pub fn freshest_neighbor_record<I>(neighbor_records: I) -> Option<Sighting>
where
    I: IntoIterator<Item = Option<Sighting>>,
{
    let mut best: Option<Sighting> = None;
    for record in neighbor_records.into_iter().flatten() {
        match best {
            Some(b) if b.time >= record.time => {}
            _ => best = Some(record),
        }
    }
    best
}

/// Resolves the point of attraction for one agent.
///
/// A detection this step overwrites the agent's memory before anything else.
/// Own and relayed sightings older than `memory_length` steps are dropped; of
/// the survivors the newer wins, and the relayed record wins a tie. Returns the
/// resolution and the agent's updated memory (stale memory is cleared).
pub fn resolve_attraction<I>(
    memory: Option<Sighting>,
    detected: Option<Vec2>,
    neighbor_records: I,
    now: u64,
    memory_length: u64,
) -> (AttractionResolution, Option<Sighting>)
where
    I: IntoIterator<Item = Option<Sighting>>,
{
    let own = record_detection(memory, detected, now).filter(|s| s.is_fresh(now, memory_length));
    let relayed =
        freshest_neighbor_record(neighbor_records).filter(|s| s.is_fresh(now, memory_length));

    let resolution = match (own, relayed) {
        (None, None) => AttractionResolution::NONE,
        (Some(o), Some(r)) if o.time > r.time => AttractionResolution {
            point: Some(o.point),
            source: AttractionSource::SelfDetection,
        },
        (_, Some(r)) => AttractionResolution {
            point: Some(r.point),
            source: AttractionSource::NeighborRelay,
        },
        (Some(o), None) => AttractionResolution {
            point: Some(o.point),
            source: AttractionSource::SelfDetection,
        },
    };
    (resolution, own)
}

/// Social-only PSO style pull: `inertia * v_prev + social * r * (p - x)`.
pub fn attraction_velocity(
    v_prev: Vec2,
    x: Vec2,
    p: Vec2,
    inertia: f64,
    social: f64,
    r: f64,
) -> Vec2 {
    v_prev * inertia + (p - x) * (social * r)
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fixed unit direction for a coincident pair, pointing from `from` to `to`.
/// Swapping the pair negates it.
pub fn coincident_direction(from: usize, to: usize) -> Vec2 {
    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
    let h = mix64((lo as u64).wrapping_mul(0x1_0000_0001) ^ mix64(hi as u64));
    let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
    let dir = Vec2::new(angle.cos(), angle.sin());
    if from <= to {
        dir
    } else {
        -dir
    }
}

/// Pairwise repulsion `-Σ (a / r_ij)^d · r̂_ij` over `(index, position)` pairs,
/// where `r̂_ij` points from the origin to neighbor `j`.
pub fn repulsion_velocity<I>(
    origin: Vec2,
    origin_id: usize,
    neighbors: I,
    strength: f64,
    exponent: u32,
) -> Vec2
where
    I: IntoIterator<Item = (usize, Vec2)>,
{
    let d = exponent as i32;
    let mut total = Vec2::ZERO;
    for (id, pos) in neighbors {
        let offset = pos - origin;
        let r = offset.norm();
        if r < COINCIDENT_EPS {
            total -= coincident_direction(origin_id, id) * COINCIDENT_PREFACTOR;
        } else {
            total -= offset * ((strength / r).powi(d) / r);
        }
    }
    total
}

/// One step of adaptive repulsion: shrink while tracking, grow while exploring,
/// always clamped to `[repulsion_min, repulsion_max]`.
pub fn adapt_repulsion_strength(strength: f64, tracking: bool, cfg: &SwarmConfig) -> f64 {
    if tracking && strength > cfg.repulsion_min {
        (strength - cfg.delta_track).max(cfg.repulsion_min)
    } else if !tracking && strength < cfg.repulsion_max {
        (strength + cfg.delta_explore).min(cfg.repulsion_max)
    } else {
        strength
    }
}
