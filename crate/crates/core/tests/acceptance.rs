//! Full-scale acceptance suite.
//!
//! Runs the full-scale campaign (50 agents, 100,000 steps per run) and prints
//! one `PASS`/`FAIL` line per criterion. Soft criteria print `WARN` instead of
//! failing. Runs are shared between criteria and spread over
//! `SWARMTRACK_JOBS` workers (default: all cores).
//!
//! `SWARMTRACK_ACCEPTANCE_SET` takes comma-separated `key=value` overrides
//! applied to every run, e.g. `inertia=2,social_weight=2` to evaluate the
//! criteria under the alternative inertia and social weight.
//!
//! ```text
//! cargo test --release -p swarmtrack --test acceptance -- --nocapture
//! ```

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmtrack::harness::{argmax_degree, default_jobs, mean_sd, row_key, run_configs};
use swarmtrack::metrics::coverage;
use swarmtrack::network::k_nearest;
use swarmtrack::strategy::{adapt_repulsion_strength, attraction_velocity, repulsion_velocity};
use swarmtrack::trace::TraceWriter;
use swarmtrack::{MetricsAccumulator, Simulation, StepSample, SwarmConfig, TargetPolicy, Vec2};

const HORIZON: u64 = 100_000;
const SEEDS: [u64; 3] = [1, 2, 3];
const DEGREES: [usize; 8] = [2, 5, 10, 15, 20, 30, 40, 49];
const MEMORIES: [u64; 6] = [0, 5, 20, 100, 500, 2000];
const SPEEDS: [f64; 4] = [0.1, 0.15, 0.2, 0.25];

#[derive(Debug, Clone, Copy)]
struct Stats {
    xi: f64,
    xi_sd: f64,
    theta: f64,
    theta_sd: f64,
}

/// Memoized run results keyed by configuration and seed.
struct Lab {
    jobs: usize,
    results: HashMap<String, (f64, f64)>,
}

impl Lab {
    fn new() -> Self {
        Self {
            jobs: default_jobs(),
            results: HashMap::new(),
        }
    }

    fn ensure(&mut self, configs: &[SwarmConfig]) {
        let mut todo: Vec<SwarmConfig> = Vec::new();
        for cfg in configs {
            let key = row_key(cfg);
            if !self.results.contains_key(&key) && !todo.iter().any(|c| row_key(c) == key) {
                todo.push(cfg.clone());
            }
        }
        if todo.is_empty() {
            return;
        }
        eprintln!(
            "running {} configurations on {} worker(s)",
            todo.len(),
            self.jobs
        );
        for (cfg, outcome) in todo.iter().zip(run_configs(&todo, self.jobs)) {
            let r = outcome.unwrap_or_else(|e| panic!("run {} failed: {e}", row_key(cfg)));
            self.results.insert(row_key(cfg), (r.xi, r.theta));
        }
    }

    fn stats(&self, base: &SwarmConfig, seeds: &[u64]) -> Stats {
        let (xs, ts): (Vec<f64>, Vec<f64>) = seeds
            .iter()
            .map(|&seed| {
                self.results[&row_key(&SwarmConfig {
                    seed,
                    ..base.clone()
                })]
            })
            .unzip();
        let (xi, xi_sd) = mean_sd(&xs);
        let (theta, theta_sd) = mean_sd(&ts);
        Stats {
            xi,
            xi_sd,
            theta,
            theta_sd,
        }
    }
}

fn with_seeds(base: &SwarmConfig, seeds: &[u64]) -> Vec<SwarmConfig> {
    seeds
        .iter()
        .map(|&seed| SwarmConfig {
            seed,
            ..base.clone()
        })
        .collect()
}

const OVERRIDES_ENV: &str = "SWARMTRACK_ACCEPTANCE_SET";

fn with_overrides(mut cfg: SwarmConfig) -> SwarmConfig {
    if let Ok(list) = std::env::var(OVERRIDES_ENV) {
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            cfg.apply_override(item)
                .unwrap_or_else(|e| panic!("{OVERRIDES_ENV}: {e}"));
        }
    }
    cfg
}

fn base() -> SwarmConfig {
    with_overrides(SwarmConfig {
        horizon: HORIZON,
        degree: 20,
        memory_length: 20,
        target_speed: 0.2,
        n_targets: 1,
        target_policy: TargetPolicy::Evasive,
        ..SwarmConfig::default()
    })
}

fn at_degree(policy: TargetPolicy, degree: usize) -> SwarmConfig {
    SwarmConfig {
        degree,
        target_policy: policy,
        ..base()
    }
}

fn at_memory(memory_length: u64) -> SwarmConfig {
    SwarmConfig {
        memory_length,
        ..base()
    }
}

fn at_speed(target_speed: f64) -> SwarmConfig {
    SwarmConfig {
        target_speed,
        ..base()
    }
}

fn pooled(a: f64, b: f64) -> f64 {
    ((a * a + b * b) / 2.0).sqrt()
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// P(X >= wins) for X ~ Binomial(n, 1/2).
fn sign_test_p(wins: u32, n: u32) -> f64 {
    let choose =
        |n: u32, k: u32| (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1));
    (wins..=n).map(|k| choose(n, k)).sum::<f64>() / 2f64.powi(n as i32)
}

#[derive(PartialEq)]
enum Verdict {
    Pass,
    Fail,
    Warn,
}

struct Report {
    lines: Vec<(String, Verdict, String)>,
}

impl Report {
    fn record(&mut self, name: &str, ok: bool, soft: bool, detail: String) {
        let verdict = match (ok, soft) {
            (true, _) => Verdict::Pass,
            (false, true) => Verdict::Warn,
            (false, false) => Verdict::Fail,
        };
        let tag = match verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Warn => "WARN",
        };
        println!("{tag} {name}: {detail}");
        self.lines.push((name.to_string(), verdict, detail));
    }
}

fn micro_oracles() -> Result<(), String> {
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };

    // repulsion magnitude (a/r)^d: at r = a it is exactly 1
    let v = repulsion_velocity(Vec2::ZERO, 0, [(1, Vec2::new(2.0, 0.0))], 2.0, 6);
    check(v == Vec2::new(-1.0, 0.0), "repulsion at r = a_R")?;
    let v = repulsion_velocity(Vec2::ZERO, 0, [(1, Vec2::new(0.0, 1.0))], 2.0, 6);
    check(v == Vec2::new(0.0, -64.0), "repulsion at r = a_R / 2")?;
    let v = repulsion_velocity(
        Vec2::ZERO,
        0,
        [(1, Vec2::new(1.0, 0.0)), (2, Vec2::new(-1.0, 0.0))],
        3.0,
        6,
    );
    check(v == Vec2::ZERO, "symmetric repulsion cancels")?;

    // attraction: w*v + c*r*(p - x)
    let v = attraction_velocity(
        Vec2::new(0.1, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(3.0, 5.0),
        1.0,
        0.5,
        0.5,
    );
    check(v == Vec2::new(0.1 + 0.5, 1.0), "attraction arithmetic")?;

    // coverage boundary is inclusive
    let target = Vec2::new(5.0, 5.0);
    check(
        coverage(target, &[Vec2::new(6.0, 5.0)], 1.0),
        "coverage at exactly rho",
    )?;
    check(
        !coverage(target, &[Vec2::new(6.0 + 1e-6, 5.0)], 1.0),
        "coverage just outside",
    )?;

    // metric arithmetic
    let mut acc = MetricsAccumulator::new();
    for t in 0..100 {
        acc.record(StepSample {
            covered: u32::from(t < 50),
            engaged: 10,
        });
    }
    check(
        acc.tracking_performance(2) == Ok(0.25),
        "Xi = 50 / (100 * 2)",
    )?;
    check(
        acc.engagement_ratio(50) == Ok(0.2),
        "Theta = 10 * 100 / (50 * 100)",
    )?;

    // a_R convergence step counts: ceil((12 - 2) / 0.75) = 14 down, ceil(10 / 0.1) = 100 up
    let cfg = SwarmConfig::default();
    let steps_to = |mut a: f64, tracking: bool, goal: f64| {
        let mut n = 0;
        while a != goal {
            a = adapt_repulsion_strength(a, tracking, &cfg);
            n += 1;
            assert!(n < 10_000);
        }
        n
    };
    check(
        steps_to(12.0, true, 2.0) == 14,
        "a_R tracking descent steps",
    )?;
    let up = steps_to(2.0, false, 12.0);
    check((100..=101).contains(&up), "a_R exploring ascent steps")?;

    // k-NN against brute force
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in [2usize, 3, 17, 50, 200] {
        let pts: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.gen_range(0.0..25.0), rng.gen_range(0.0..25.0)))
            .collect();
        for k in [1, n / 2, n - 1].into_iter().filter(|&k| k >= 1) {
            let table = k_nearest(&pts, k).map_err(|e| e.to_string())?;
            for i in 0..n {
                let mut brute: Vec<(f64, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (pts[i].distance_squared(pts[j]), j))
                    .collect();
                brute.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let want: Vec<usize> = brute.iter().take(k).map(|p| p.1).collect();
                check(table.neighbors(i) == want.as_slice(), "k-NN vs brute force")?;
            }
        }
    }
    Ok(())
}

fn traced_bytes(cfg: &SwarmConfig) -> (Vec<u8>, f64, f64) {
    let mut buf = Vec::new();
    let result = {
        let mut writer = TraceWriter::new(&mut buf, cfg.n_agents, cfg.n_targets).unwrap();
        let r = Simulation::new(cfg.clone())
            .unwrap()
            .run_to_end(Some(&mut writer))
            .unwrap();
        writer.flush().unwrap();
        r
    };
    (buf, result.xi, result.theta)
}

#[test]
fn acceptance() {
    let mut lab = Lab::new();
    let mut report = Report { lines: Vec::new() };
    let seeds5 = [1, 2, 3, 4, 5];

    if let Ok(list) = std::env::var(OVERRIDES_ENV) {
        println!("overrides: {list}");
    }
    let mut batch = Vec::new();
    for policy in [TargetPolicy::Evasive, TargetPolicy::NonEvasive] {
        for k in DEGREES {
            batch.extend(with_seeds(&at_degree(policy, k), &SEEDS));
        }
    }
    for m in MEMORIES {
        batch.extend(with_seeds(&at_memory(m), &SEEDS));
    }
    for s in SPEEDS {
        batch.extend(with_seeds(&at_speed(s), &SEEDS));
    }
    batch.extend(with_seeds(&base(), &seeds5));
    lab.ensure(&batch);

    // 1. memory necessity
    let mem: Vec<Stats> = MEMORIES
        .iter()
        .map(|&m| lab.stats(&at_memory(m), &SEEDS))
        .collect();
    let (none, with) = (mem[0], mem[2]);
    report.record(
        "1 memory necessity",
        with.xi >= 2.0 * none.xi,
        false,
        format!(
            "Xi(t_mem=20) = {:.4}, Xi(t_mem=0) = {:.4}, ratio {:.1}",
            with.xi,
            none.xi,
            with.xi / none.xi
        ),
    );

    // 2. interior optimum in memory length
    let (best_i, best) = mem[1..5]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.xi.total_cmp(&b.1.xi))
        .map(|(i, s)| (i + 1, *s))
        .unwrap();
    let long = mem[5];
    let margin_low = (best.xi - none.xi) / pooled(best.xi_sd, none.xi_sd);
    let margin_high = (best.xi - long.xi) / pooled(best.xi_sd, long.xi_sd);
    report.record(
        "2 interior memory optimum",
        margin_low >= 3.0 && margin_high >= 3.0,
        false,
        format!(
            "best t_mem = {} with Xi = {:.4}; vs t_mem=0 {:.1} sd, vs t_mem=2000 (Xi = {:.4}) {:.1} sd; curve {}",
            MEMORIES[best_i],
            best.xi,
            margin_low,
            long.xi,
            margin_high,
            mem.iter().map(|s| format!("{:.4}", s.xi)).collect::<Vec<_>>().join(" ")
        ),
    );

    // 3. interior optimum in degree, evasive
    let evasive: Vec<Stats> = DEGREES
        .iter()
        .map(|&k| lab.stats(&at_degree(TargetPolicy::Evasive, k), &SEEDS))
        .collect();
    let (best_i, best) = evasive[1..7]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.xi.total_cmp(&b.1.xi))
        .map(|(i, s)| (i + 1, *s))
        .unwrap();
    let (lo, hi) = (evasive[0], evasive[7]);
    let margin_lo = (best.xi - lo.xi) / pooled(best.xi_sd, lo.xi_sd);
    let margin_hi = (best.xi - hi.xi) / pooled(best.xi_sd, hi.xi_sd);
    report.record(
        "3 interior degree optimum",
        margin_lo >= 3.0 && margin_hi >= 3.0,
        false,
        format!(
            "best k = {} with Xi = {:.4}; vs k=2 {:.1} sd, vs k=49 (Xi = {:.4}) {:.1} sd; curve {}",
            DEGREES[best_i],
            best.xi,
            margin_lo,
            hi.xi,
            margin_hi,
            evasive
                .iter()
                .map(|s| format!("{:.4}", s.xi))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );

    // 4. speed monotonicity
    let speeds: Vec<Stats> = SPEEDS
        .iter()
        .map(|&s| lab.stats(&at_speed(s), &SEEDS))
        .collect();
    let mut small_rises = 0;
    let mut big_rise = false;
    for w in speeds.windows(2) {
        if w[1].xi > w[0].xi {
            if w[1].xi - w[0].xi <= pooled(w[0].xi_sd, w[1].xi_sd) {
                small_rises += 1;
            } else {
                big_rise = true;
            }
        }
    }
    report.record(
        "4 speed monotonicity",
        !big_rise && small_rises <= 1,
        false,
        format!(
            "Xi over v_o {:?}: {}",
            SPEEDS,
            speeds
                .iter()
                .map(|s| format!("{:.4}", s.xi))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );

    // 5. engagement rises with degree
    let ks: Vec<f64> = DEGREES.iter().map(|&k| k as f64).collect();
    let thetas: Vec<f64> = evasive.iter().map(|s| s.theta).collect();
    let rho = spearman(&ks, &thetas);
    report.record(
        "5 engagement vs degree",
        rho >= 0.8,
        false,
        format!(
            "Spearman {:.3}; Theta {}",
            rho,
            thetas
                .iter()
                .map(|t| format!("{t:.3}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );

    // 6. more targets, lower tracking, at the evasive k*
    let k_star_evasive = argmax_degree(
        &DEGREES
            .iter()
            .zip(&evasive)
            .map(|(&k, s)| (k, s.xi))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let at_targets = |j: usize| SwarmConfig {
        n_targets: j,
        degree: k_star_evasive,
        ..base()
    };
    let batch: Vec<SwarmConfig> = (1..=3)
        .flat_map(|j| with_seeds(&at_targets(j), &SEEDS))
        .collect();
    lab.ensure(&batch);
    let by_j: Vec<Stats> = (1..=3).map(|j| lab.stats(&at_targets(j), &SEEDS)).collect();
    let gaps: Vec<f64> = by_j
        .windows(2)
        .map(|w| (w[0].xi - w[1].xi) / pooled(w[0].xi_sd, w[1].xi_sd))
        .collect();
    report.record(
        "6 target-count degradation",
        gaps.iter().all(|&g| g >= 1.0),
        false,
        format!(
            "k = {k_star_evasive}; Xi(J=1,2,3) = {}; gaps {} sd",
            by_j.iter()
                .map(|s| format!("{:.4}", s.xi))
                .collect::<Vec<_>>()
                .join(" "),
            gaps.iter()
                .map(|g| format!("{g:.1}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );

    // 7. k* ordering (soft)
    let plain: Vec<Stats> = DEGREES
        .iter()
        .map(|&k| lab.stats(&at_degree(TargetPolicy::NonEvasive, k), &SEEDS))
        .collect();
    let k_star_plain = argmax_degree(
        &DEGREES
            .iter()
            .zip(&plain)
            .map(|(&k, s)| (k, s.xi))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    report.record(
        "7 k* ordering",
        k_star_evasive <= k_star_plain,
        true,
        format!("k*(evasive) = {k_star_evasive}, k*(non-evasive) = {k_star_plain}"),
    );

    // 8. seed variability
    let five = lab.stats(&base(), &seeds5);
    let (rx, rt) = (five.xi_sd / five.xi, five.theta_sd / five.theta);
    report.record(
        "8 seed variability",
        rx <= 0.05 && rt <= 0.05,
        false,
        format!(
            "relative sd Xi {:.2}% (mean {:.4}), Theta {:.2}% (mean {:.4})",
            100.0 * rx,
            five.xi,
            100.0 * rt,
            five.theta
        ),
    );

    // 9. determinism
    let det_cfg = SwarmConfig {
        horizon: 10_000,
        seed: 7,
        ..base()
    };
    let (a, xa, ta) = traced_bytes(&det_cfg);
    let (b, xb, tb) = traced_bytes(&det_cfg);
    report.record(
        "9 determinism",
        a == b && xa.to_bits() == xb.to_bits() && ta.to_bits() == tb.to_bits(),
        false,
        format!(
            "{} trace bytes over {} steps, Xi = {xa}, Theta = {ta}",
            a.len(),
            det_cfg.horizon
        ),
    );

    // 10. micro-oracles
    let oracles = micro_oracles();
    report.record(
        "10 micro-oracles",
        oracles.is_ok(),
        false,
        match oracles {
            Ok(()) => "all exact".to_string(),
            Err(what) => format!("mismatch: {what}"),
        },
    );

    // 11. small-swarm analog of the robot experiment
    let robots = |memory_length: u64, seed: u64| {
        with_overrides(SwarmConfig {
            n_agents: 6,
            degree: 5,
            arena_side: 8.0,
            target_radius: Some(1.0),
            target_speed: 0.05,
            memory_length,
            horizon: 5_000,
            seed,
            ..SwarmConfig::default()
        })
    };
    let seeds10: Vec<u64> = (1..=10).collect();
    let batch: Vec<SwarmConfig> = seeds10
        .iter()
        .flat_map(|&s| [robots(0, s), robots(20, s)])
        .collect();
    lab.ensure(&batch);
    let pairs: Vec<(f64, f64)> = seeds10
        .iter()
        .map(|&s| {
            (
                lab.results[&row_key(&robots(20, s))].0,
                lab.results[&row_key(&robots(0, s))].0,
            )
        })
        .collect();
    let wins = pairs.iter().filter(|(m, z)| m > z).count() as u32;
    let p = sign_test_p(wins, 10);
    let (mean_m, sd_m) = mean_sd(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let (mean_z, sd_z) = mean_sd(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    report.record(
        "11 small-swarm memory benefit",
        mean_m > mean_z && p <= 0.05,
        false,
        format!("Xi with memory {mean_m:.4} +- {sd_m:.4}, without {mean_z:.4} +- {sd_z:.4}; {wins}/10 wins, p = {p:.4}"),
    );

    let failed: Vec<&str> = report
        .lines
        .iter()
        .filter(|l| l.1 == Verdict::Fail)
        .map(|l| l.0.as_str())
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn spearman_and_sign_test_helpers() {
    assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-12);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
    assert_eq!(ranks(&[5.0, 1.0, 5.0]), vec![2.5, 1.0, 2.5]);
    assert!((sign_test_p(10, 10) - 1.0 / 1024.0).abs() < 1e-15);
    assert!((sign_test_p(9, 10) - 11.0 / 1024.0).abs() < 1e-15);
    assert!(sign_test_p(8, 10) > 0.05);
}
