use std::fs;
use std::path::Path;

use swarmtrack::harness::{run_configs, run_sweep, summarize, SweepRow, SweepSpec, SWEEP_SCHEMA};
use swarmtrack::{run, SwarmConfig};

const SPEC: &str = "horizon = 300\n\
                    n_agents = 12\n\
                    sweep.degree = 2, 5, 11\n\
                    sweep.memory_length = 0, 20\n\
                    seeds = 1, 2\n";

fn rows(path: &Path) -> Vec<SweepRow> {
    csv::Reader::from_path(path)
        .unwrap()
        .deserialize()
        .map(Result::unwrap)
        .collect()
}

/// Rows with the timing column blanked, for comparisons across invocations.
fn untimed(path: &Path) -> Vec<SweepRow> {
    rows(path)
        .into_iter()
        .map(|r| SweepRow { wall_ms: 0, ..r })
        .collect()
}

fn spec(jobs: usize) -> SweepSpec {
    let mut s = SweepSpec::from_spec_str(SPEC).unwrap();
    s.jobs = jobs;
    s
}

#[test]
fn sweep_writes_one_row_per_grid_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let report = run_sweep(&spec(2), &out, false).unwrap();
    assert_eq!(
        (report.total, report.executed, report.reused, report.failed),
        (12, 12, 0, 0)
    );
    let got = rows(&out);
    assert_eq!(got.len(), 12);
    assert!(got
        .iter()
        .all(|r| r.schema == SWEEP_SCHEMA && r.succeeded() && r.horizon == 300));
    // rows come back in grid order and match direct runs
    let points = spec(1).points();
    for (row, point) in got.iter().zip(&points) {
        assert_eq!(row.key, point.key);
        let direct = run(&point.config).unwrap();
        assert_eq!(row.xi, Some(direct.xi));
        assert_eq!(row.theta, Some(direct.theta));
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    run_sweep(&spec(1), &a, false).unwrap();
    run_sweep(&spec(4), &b, false).unwrap();
    assert_eq!(untimed(&a), untimed(&b));

    let configs: Vec<SwarmConfig> = spec(1).points().into_iter().map(|p| p.config).collect();
    let one: Vec<_> = run_configs(&configs, 1)
        .into_iter()
        .map(|r| r.unwrap().xi)
        .collect();
    let many: Vec<_> = run_configs(&configs, 3)
        .into_iter()
        .map(|r| r.unwrap().xi)
        .collect();
    assert_eq!(one, many);
}

#[test]
fn resume_on_a_complete_file_reruns_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    run_sweep(&spec(2), &out, false).unwrap();
    let before = fs::read(&out).unwrap();
    let report = run_sweep(&spec(2), &out, true).unwrap();
    assert_eq!((report.reused, report.executed), (12, 0));
    assert_eq!(fs::read(&out).unwrap(), before);
}

#[test]
fn resume_after_interruption_completes_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let (full, cut) = (dir.path().join("full.csv"), dir.path().join("cut.csv"));
    run_sweep(&spec(1), &full, false).unwrap();

    // keep the header and five rows, then a half-written sixth row
    let text = fs::read_to_string(&full).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut partial = lines[..6].join("\n");
    partial.push('\n');
    partial.push_str(&lines[6][..lines[6].len() / 2]);
    fs::write(&cut, partial).unwrap();

    let report = run_sweep(&spec(2), &cut, true).unwrap();
    assert_eq!((report.reused, report.executed), (5, 7));
    assert_eq!(untimed(&cut), untimed(&full));
}

#[test]
fn resume_reruns_failed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    run_sweep(&spec(1), &out, false).unwrap();
    let mut all = rows(&out);
    all[3].xi = None;
    all[3].error = "interrupted".into();
    let mut w = csv::Writer::from_path(&out).unwrap();
    for r in &all {
        w.serialize(r).unwrap();
    }
    w.flush().unwrap();
    drop(w);

    let report = run_sweep(&spec(1), &out, true).unwrap();
    assert_eq!((report.reused, report.executed, report.failed), (11, 1, 0));
}

#[test]
fn summary_aggregates_over_seeds_and_skips_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    run_sweep(&spec(2), &out, false).unwrap();
    let mut text = fs::read_to_string(&out).unwrap();
    text.push_str("1,garbage-row\n");
    text.push_str("1,x-9,x,evasive,1,0.2,20,5,9,300,,,3,engine exploded\n");

    let summary = summarize(text.as_bytes()).unwrap();
    assert_eq!(summary.skipped, 2);
    assert_eq!(summary.rows.len(), 6);
    for agg in &summary.rows {
        assert_eq!(agg.runs, 2);
        let seeds: Vec<f64> = rows(&out)
            .iter()
            .filter(|r| r.fingerprint == agg.fingerprint)
            .map(|r| r.xi.unwrap())
            .collect();
        let mean = (seeds[0] + seeds[1]) / 2.0;
        let sd = (seeds[0] - seeds[1]).abs() / 2f64.sqrt();
        assert!((agg.xi_mean - mean).abs() < 1e-12);
        assert!((agg.xi_sd - sd).abs() < 1e-12);
    }
    // each (policy, targets, speed, memory) group reports its own best degree
    for memory in [0, 20] {
        let group: Vec<_> = summary
            .rows
            .iter()
            .filter(|r| r.memory_length == memory)
            .collect();
        let best = group
            .iter()
            .max_by(|a, b| {
                a.xi_mean
                    .total_cmp(&b.xi_mean)
                    .then(b.degree.cmp(&a.degree))
            })
            .unwrap();
        assert!(group.iter().all(|r| r.k_star == best.degree));
    }
}

#[test]
fn spec_errors_are_reported() {
    assert!(SweepSpec::from_spec_str("sweep.horizon = 5, 6\n").is_err());
    assert!(SweepSpec::from_spec_str("seeds =\n").is_err());
    assert!(SweepSpec::from_spec_str("no_such_key = 1\n").is_err());
    assert!(SweepSpec::from_spec_str("sweep.degree = 2, x\n").is_err());
}

#[test]
fn shipped_sweep_specs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("sweeps");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "sweep") {
            let spec =
                SweepSpec::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(!spec.is_empty());
            seen += 1;
        }
    }
    assert!(seen >= 8);
}
