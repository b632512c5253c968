use std::collections::HashMap;
use std::io::{Read, Write};

use serde::Serialize;

use super::sweep::SweepRow;
use super::HarnessError;

/// Sample mean and standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// Degree with the highest score; equal scores go to the lower degree.
pub fn argmax_degree(points: &[(usize, f64)]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &(k, v) in points {
        match best {
            Some((bk, bv)) if v < bv || (v == bv && k > bk) => {}
            _ => best = Some((k, v)),
        }
    }
    best.map(|(k, _)| k)
}

/// Per-configuration aggregate over seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub fingerprint: String,
    pub target_policy: String,
    pub n_targets: usize,
    pub target_speed: f64,
    pub memory_length: u64,
    pub degree: usize,
    pub horizon: u64,
    pub runs: usize,
    pub xi_mean: f64,
    pub xi_sd: f64,
    pub theta_mean: f64,
    pub theta_sd: f64,
    /// Best degree of the series this row belongs to (all rows equal except
    /// in degree).
    pub k_star: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub rows: Vec<AggregateRow>,
    /// Rows that failed to parse or recorded a run error.
    pub skipped: usize,
}

type SeriesKey = (String, usize, u64, u64, u64);

fn series_key(r: &AggregateRow) -> SeriesKey {
    (
        r.target_policy.clone(),
        r.n_targets,
        r.target_speed.to_bits(),
        r.memory_length,
        r.horizon,
    )
}

/// Aggregates a sweep CSV. Configurations appear in order of first occurrence.
pub fn summarize<R: Read>(input: R) -> Result<Summary, HarnessError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let mut skipped = 0;
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, (SweepRow, Vec<f64>, Vec<f64>)> = HashMap::new();
    for rec in reader.deserialize::<SweepRow>() {
        let row = match rec {
            Ok(r) if r.succeeded() => r,
            _ => {
                skipped += 1;
                continue;
            }
        };
        let (xi, theta) = (row.xi.unwrap_or_default(), row.theta.unwrap_or_default());
        let entry = groups.entry(row.fingerprint.clone()).or_insert_with(|| {
            order.push(row.fingerprint.clone());
            (row.clone(), Vec::new(), Vec::new())
        });
        entry.1.push(xi);
        entry.2.push(theta);
    }

    let mut rows: Vec<AggregateRow> = order
        .iter()
        .map(|fp| {
            let (first, xis, thetas) = &groups[fp];
            let (xi_mean, xi_sd) = mean_sd(xis);
            let (theta_mean, theta_sd) = mean_sd(thetas);
            AggregateRow {
                fingerprint: fp.clone(),
                target_policy: first.target_policy.clone(),
                n_targets: first.n_targets,
                target_speed: first.target_speed,
                memory_length: first.memory_length,
                degree: first.degree,
                horizon: first.horizon,
                runs: xis.len(),
                xi_mean,
                xi_sd,
                theta_mean,
                theta_sd,
                k_star: first.degree,
            }
        })
        .collect();

    let mut series: HashMap<SeriesKey, Vec<(usize, f64)>> = HashMap::new();
    for r in &rows {
        series
            .entry(series_key(r))
            .or_default()
            .push((r.degree, r.xi_mean));
    }
    for r in &mut rows {
        if let Some(k) = argmax_degree(&series[&series_key(r)]) {
            r.k_star = k;
        }
    }
    Ok(Summary { rows, skipped })
}

pub fn write_summary<W: Write>(summary: &Summary, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for row in &summary.rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| HarnessError::Io {
        path: "<summary>".into(),
        source: e,
    })
}
