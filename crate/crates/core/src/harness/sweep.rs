use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::HarnessError;
use crate::domain::{key_values, SwarmConfig, TargetPolicy};
use crate::engine::{run, EngineError, RunResult};

/// Version of the sweep CSV column layout, written in every row.
pub const SWEEP_SCHEMA: u32 = 1;

/// Environment variable consulted for the default worker count.
pub const JOBS_ENV: &str = "SWARMTRACK_JOBS";

/// Worker count from `SWARMTRACK_JOBS`, else the machine's parallelism.
pub fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// A grid of runs: the Cartesian product of the listed values over a base
/// config, times the seed list.
///
/// Spec files use the config grammar. Plain config keys set the base;
/// `sweep.<key> = v1, v2, ...` lists the values for one of the swept keys
/// (`degree`, `memory_length`, `target_speed`, `n_targets`, `target_policy`);
/// `seeds`, `jobs` and `out` set the remaining fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SwarmConfig,
    pub degree: Vec<usize>,
    pub memory_length: Vec<u64>,
    pub target_speed: Vec<f64>,
    pub n_targets: Vec<usize>,
    pub target_policy: Vec<TargetPolicy>,
    pub seeds: Vec<u64>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

/// One cell of the grid in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub key: String,
    pub fingerprint: String,
    pub config: SwarmConfig,
}

/// Hex digest of every parameter except the seed.
pub fn fingerprint(cfg: &SwarmConfig) -> String {
    let unseeded = SwarmConfig {
        seed: 0,
        ..cfg.clone()
    };
    let digest = Sha256::digest(unseeded.to_config_string().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Row key: `<fingerprint>-<seed>`.
pub fn row_key(cfg: &SwarmConfig) -> String {
    format!("{}-{}", fingerprint(cfg), cfg.seed)
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, HarnessError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| HarnessError::Spec(format!("bad value `{s}` in `{key}`: {e}")))
        })
        .collect()
}

impl SweepSpec {
    pub fn new(base: SwarmConfig) -> Self {
        Self {
            seeds: vec![base.seed],
            base,
            degree: Vec::new(),
            memory_length: Vec::new(),
            target_speed: Vec::new(),
            n_targets: Vec::new(),
            target_policy: Vec::new(),
            out: None,
            jobs: default_jobs(),
        }
    }

    pub fn from_spec_str(text: &str) -> Result<Self, HarnessError> {
        let mut spec = SweepSpec::new(SwarmConfig::default());
        let mut seeds_given = false;
        for (key, value, line) in key_values(text)? {
            match key.as_str() {
                "sweep.degree" => spec.degree = parse_list(&key, &value)?,
                "sweep.memory_length" => spec.memory_length = parse_list(&key, &value)?,
                "sweep.target_speed" => spec.target_speed = parse_list(&key, &value)?,
                "sweep.n_targets" => spec.n_targets = parse_list(&key, &value)?,
                "sweep.target_policy" => spec.target_policy = parse_list(&key, &value)?,
                "seeds" => {
                    spec.seeds = parse_list(&key, &value)?;
                    seeds_given = true;
                }
                "jobs" => {
                    spec.jobs = value.parse().map_err(|_| {
                        HarnessError::Spec(format!("line {line}: bad jobs `{value}`"))
                    })?
                }
                "out" => spec.out = Some(PathBuf::from(value)),
                k if k.starts_with("sweep.") => {
                    return Err(HarnessError::Spec(format!(
                        "line {line}: `{k}` cannot be swept"
                    )))
                }
                _ => spec.base.set(&key, &value)?,
            }
        }
        if !seeds_given {
            spec.seeds = vec![spec.base.seed];
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_spec_str(&text)
    }

    fn values<T: Clone>(list: &[T], base: T) -> Vec<T> {
        if list.is_empty() {
            vec![base]
        } else {
            list.to_vec()
        }
    }

    /// Number of runs in the grid.
    pub fn len(&self) -> usize {
        let n = |len: usize| len.max(1);
        n(self.degree.len())
            * n(self.memory_length.len())
            * n(self.target_speed.len())
            * n(self.n_targets.len())
            * n(self.target_policy.len())
            * self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid cells ordered by policy, target count, target speed, memory,
    /// degree and finally seed.
    pub fn points(&self) -> Vec<SweepPoint> {
        let b = &self.base;
        let mut out = Vec::with_capacity(self.len());
        for &policy in &Self::values(&self.target_policy, b.target_policy) {
            for &targets in &Self::values(&self.n_targets, b.n_targets) {
                for &speed in &Self::values(&self.target_speed, b.target_speed) {
                    for &memory in &Self::values(&self.memory_length, b.memory_length) {
                        for &degree in &Self::values(&self.degree, b.degree) {
                            for &seed in &self.seeds {
                                let config = SwarmConfig {
                                    target_policy: policy,
                                    n_targets: targets,
                                    target_speed: speed,
                                    memory_length: memory,
                                    degree,
                                    seed,
                                    ..b.clone()
                                };
                                out.push(SweepPoint {
                                    index: out.len(),
                                    key: row_key(&config),
                                    fingerprint: fingerprint(&config),
                                    config,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Every generated config must validate, and the grid must be non-empty.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.seeds.is_empty() {
            return Err(HarnessError::Spec("seed list is empty".into()));
        }
        if self.jobs == 0 {
            return Err(HarnessError::Spec("jobs must be at least 1".into()));
        }
        for p in self.points() {
            p.config.validate()?;
        }
        Ok(())
    }
}

/// One line of the sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub schema: u32,
    pub key: String,
    pub fingerprint: String,
    pub target_policy: String,
    pub n_targets: usize,
    pub target_speed: f64,
    pub memory_length: u64,
    pub degree: usize,
    pub seed: u64,
    pub horizon: u64,
    pub xi: Option<f64>,
    pub theta: Option<f64>,
    pub wall_ms: u64,
    pub error: String,
}

impl SweepRow {
    pub fn new(point: &SweepPoint, outcome: &Result<RunResult, EngineError>, wall_ms: u64) -> Self {
        let c = &point.config;
        let (xi, theta, error) = match outcome {
            Ok(r) => (Some(r.xi), Some(r.theta), String::new()),
            Err(e) => (None, None, e.to_string()),
        };
        Self {
            schema: SWEEP_SCHEMA,
            key: point.key.clone(),
            fingerprint: point.fingerprint.clone(),
            target_policy: c.target_policy.to_string(),
            n_targets: c.n_targets,
            target_speed: c.target_speed,
            memory_length: c.memory_length,
            degree: c.degree,
            seed: c.seed,
            horizon: c.horizon,
            xi,
            theta,
            wall_ms,
            error,
        }
    }

    pub fn succeeded(&self) -> bool {
        self.error.is_empty() && self.xi.is_some() && self.theta.is_some()
    }
}

/// What a sweep did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub total: usize,
    /// Rows reused from an earlier, interrupted or complete, invocation.
    pub reused: usize,
    pub executed: usize,
    pub failed: usize,
}

/// Runs configs on `jobs` workers; results come back in input order.
pub fn run_configs(configs: &[SwarmConfig], jobs: usize) -> Vec<Result<RunResult, EngineError>> {
    with_pool(jobs, || configs.par_iter().map(run).collect())
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn read_rows(path: &Path) -> Vec<SweepRow> {
    let Ok(mut reader) = csv::ReaderBuilder::new().flexible(true).from_path(path) else {
        return Vec::new();
    };
    // a row cut off by an interruption fails to parse and is simply redone
    reader
        .deserialize::<SweepRow>()
        .filter_map(Result::ok)
        .collect()
}

fn write_sorted(path: &Path, rows: &[SweepRow]) -> Result<(), HarnessError> {
    let tmp = path.with_extension("csv.tmp");
    {
        let mut w = csv::Writer::from_path(&tmp)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| HarnessError::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

/// Runs every grid cell and writes one row each to `out`.
///
/// Rows are appended and flushed as runs finish, so an interrupted sweep
/// leaves usable partial output. With `resume`, rows already present with a
/// matching key and no error are kept and not rerun. On completion the file is
/// rewritten in grid order, independent of the worker count.
pub fn run_sweep(spec: &SweepSpec, out: &Path, resume: bool) -> Result<SweepReport, HarnessError> {
    spec.validate()?;
    let points = spec.points();
    let index_of: HashMap<&str, usize> = points.iter().map(|p| (p.key.as_str(), p.index)).collect();

    let mut done: HashMap<usize, SweepRow> = HashMap::new();
    if resume && out.exists() {
        for row in read_rows(out) {
            if let Some(&i) = index_of.get(row.key.as_str()) {
                if row.succeeded() {
                    done.insert(i, row);
                }
            }
        }
    }
    let reused = done.len();
    let pending: Vec<&SweepPoint> = points
        .iter()
        .filter(|p| !done.contains_key(&p.index))
        .collect();

    if !pending.is_empty() {
        let sink = if resume && out.exists() {
            // start a clean append log from the rows worth keeping
            let mut kept: Vec<SweepRow> = done.values().cloned().collect();
            kept.sort_by_key(|r| index_of[r.key.as_str()]);
            write_sorted(out, &kept)?;
            let file = OpenOptions::new()
                .append(true)
                .open(out)
                .map_err(|e| HarnessError::io(out, e))?;
            csv::WriterBuilder::new()
                .has_headers(kept.is_empty())
                .from_writer(file)
        } else {
            let file = File::create(out).map_err(|e| HarnessError::io(out, e))?;
            csv::Writer::from_writer(file)
        };
        let sink = Mutex::new(sink);

        let fresh: Vec<(usize, SweepRow)> = with_pool(spec.jobs, || {
            pending
                .par_iter()
                .map(|point| {
                    let start = Instant::now();
                    let outcome = run(&point.config);
                    let row = SweepRow::new(point, &outcome, start.elapsed().as_millis() as u64);
                    let mut w = sink.lock().unwrap_or_else(|p| p.into_inner());
                    // best effort; the final rewrite below is authoritative
                    let _ = w
                        .serialize(&row)
                        .and_then(|_| w.flush().map_err(csv::Error::from));
                    (point.index, row)
                })
                .collect()
        });
        done.extend(fresh);
    }

    let mut rows: Vec<(usize, SweepRow)> = done.into_iter().collect();
    rows.sort_by_key(|(i, _)| *i);
    let rows: Vec<SweepRow> = rows.into_iter().map(|(_, r)| r).collect();
    let failed = rows.iter().filter(|r| !r.succeeded()).count();
    write_sorted(out, &rows)?;
    Ok(SweepReport {
        total: points.len(),
        reused,
        executed: pending.len(),
        failed,
    })
}
