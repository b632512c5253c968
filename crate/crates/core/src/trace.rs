//! Per-step CSV trace.
//!
//! Header, for `N` agents and `J` targets:
//!
//! ```text
//! t,a0_x,a0_y,a0_s,a0_ar,...,a{N-1}_ar,o0_x,o0_y,o0_mode,o0_cov,...,o{J-1}_cov
//! ```
//!
//! One row per completed step. `t` is the step count after the step (1-based),
//! `aI_s` the agent's tracking state (0/1), `aI_ar` its repulsion strength,
//! `oM_mode` one of `roam`, `evade`, `sprint` and `oM_cov` the target's
//! coverage (0/1). Floats are written in shortest round-trip form.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::engine::WorldState;
use crate::metrics::{coverage, MetricsAccumulator, StepSample};

pub struct TraceWriter<W: Write> {
    out: csv::Writer<W>,
    row: Vec<String>,
}

fn to_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W, n_agents: usize, n_targets: usize) -> io::Result<Self> {
        let mut out = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        let mut header = vec!["t".to_string()];
        for i in 0..n_agents {
            for f in ["x", "y", "s", "ar"] {
                header.push(format!("a{i}_{f}"));
            }
        }
        for m in 0..n_targets {
            for f in ["x", "y", "mode", "cov"] {
                header.push(format!("o{m}_{f}"));
            }
        }
        out.write_record(&header).map_err(to_io)?;
        Ok(Self {
            out,
            row: Vec::new(),
        })
    }

    pub fn write_step(&mut self, world: &WorldState, radius: f64) -> io::Result<()> {
        let positions = world.agent_positions();
        self.row.clear();
        self.row.push(world.t.to_string());
        for a in &world.agents {
            self.row.push(a.position.x.to_string());
            self.row.push(a.position.y.to_string());
            self.row.push(u8::from(a.tracking).to_string());
            self.row.push(a.repulsion.to_string());
        }
        for t in &world.targets {
            self.row.push(t.position.x.to_string());
            self.row.push(t.position.y.to_string());
            self.row.push(t.mode.as_str().to_string());
            self.row
                .push(u8::from(coverage(t.position, &positions, radius)).to_string());
        }
        self.out.write_record(&self.row).map_err(to_io)
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("trace row {row}: {reason}")]
    Malformed { row: usize, reason: String },
}

/// Totals recomputed from a trace, with the population sizes read off the header.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub n_agents: usize,
    pub n_targets: usize,
    pub metrics: MetricsAccumulator,
}

/// Re-derives the metric sums from a trace, skipping rows with `t <= warmup`.
pub fn replay<R: Read>(input: R, warmup: u64) -> Result<Replay, ReplayError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers()?.clone();
    let state_cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with('a') && h.ends_with("_s"))
        .map(|(i, _)| i)
        .collect();
    let cov_cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with('o') && h.ends_with("_cov"))
        .map(|(i, _)| i)
        .collect();

    let flag = |rec: &csv::StringRecord, col: usize, row: usize| -> Result<u32, ReplayError> {
        match rec.get(col) {
            Some("0") => Ok(0),
            Some("1") => Ok(1),
            other => Err(ReplayError::Malformed {
                row,
                reason: format!("expected 0/1 in column {col}, got {other:?}"),
            }),
        }
    };

    let mut metrics = MetricsAccumulator::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let t: u64 =
            rec.get(0)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ReplayError::Malformed {
                    row,
                    reason: "bad step column".into(),
                })?;
        if t <= warmup {
            continue;
        }
        let mut engaged = 0;
        for &c in &state_cols {
            engaged += flag(&rec, c, row)?;
        }
        let mut covered = 0;
        for &c in &cov_cols {
            covered += flag(&rec, c, row)?;
        }
        metrics.record(StepSample { covered, engaged });
    }
    Ok(Replay {
        n_agents: state_cols.len(),
        n_targets: cov_cols.len(),
        metrics,
    })
}
