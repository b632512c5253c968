//! Topological k-nearest communication graph, rebuilt every step.

use thiserror::Error;

use crate::domain::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("k = {k} out of range [1, N-1] for N = {n}")]
pub struct DegreeError {
    pub k: usize,
    pub n: usize,
}

/// Directed neighbor lists: row `i` holds the `k` agents closest to agent `i`,
/// nearest first, distance ties going to the lower agent index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborTable {
    k: usize,
    flat: Vec<usize>,
}

impl NeighborTable {
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn neighbors(&self, agent: usize) -> &[usize] {
        &self.flat[agent * self.k..(agent + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.flat.chunks_exact(self.k)
    }
}

fn check_degree(n: usize, k: usize) -> Result<(), DegreeError> {
    if k == 0 || k >= n {
        Err(DegreeError { k, n })
    } else {
        Ok(())
    }
}

/// Sort key ordering by squared distance, then index. Squared distances are
/// non-negative, so their IEEE bit patterns order like the values.
#[inline]
fn sort_key(d2: f64, j: usize) -> u128 {
    (u128::from(d2.to_bits()) << 64) | j as u128
}

/// Writes the `k` nearest neighbors of `agent` into `out`. `scratch` is reused
/// between calls to avoid reallocating.
fn nearest_into(
    positions: &[Vec2],
    agent: usize,
    k: usize,
    scratch: &mut Vec<u128>,
    out: &mut Vec<usize>,
) {
    let origin = positions[agent];
    scratch.clear();
    scratch.extend(
        positions
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != agent)
            .map(|(j, &p)| sort_key(origin.distance_squared(p), j)),
    );
    if k < scratch.len() {
        scratch.select_nth_unstable(k - 1);
        scratch.truncate(k);
    }
    scratch.sort_unstable();
    out.extend(scratch.iter().map(|&key| key as u64 as usize));
}

/// Builds the neighbor table for every agent with an O(N²) scan.
///
/// Accepts any `1 <= k <= N-1`; the simulation itself requires `k >= 2`,
/// which config validation enforces.
pub fn k_nearest(positions: &[Vec2], k: usize) -> Result<NeighborTable, DegreeError> {
    check_degree(positions.len(), k)?;
    let mut scratch = Vec::with_capacity(positions.len());
    let mut flat = Vec::with_capacity(positions.len() * k);
    for agent in 0..positions.len() {
        nearest_into(positions, agent, k, &mut scratch, &mut flat);
    }
    Ok(NeighborTable { k, flat })
}

/// Neighbor list of a single agent, for sequential updates where positions
/// change between queries.
pub fn k_nearest_of(positions: &[Vec2], agent: usize, k: usize) -> Result<Vec<usize>, DegreeError> {
    check_degree(positions.len(), k)?;
    let mut scratch = Vec::with_capacity(positions.len());
    let mut out = Vec::with_capacity(k);
    nearest_into(positions, agent, k, &mut scratch, &mut out);
    Ok(out)
}
