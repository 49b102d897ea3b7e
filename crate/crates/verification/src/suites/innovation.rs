use super::{agree_threshold, two_pin_model, FAMILY_LEVEL};
use crate::paths::{euler_paths, exact_paths};
use crate::report::{Rule, SuiteConfig, TestCase};
use crate::stats::{kolmogorov_sf, ks_two_sample, MeanAcc};
use deterministic_bridge::{euler_bridge, sample_bridge, BridgeSpec, TimeGrid};
use gaussian_core::{rng_stream, Result};
use info_process::{step_law, EulerOptions, InfoModel};
use rayon::prelude::*;

const HORIZON: f64 = 10.0;
const BUCKETS: usize = 10;
/// Steps per bucket; the first bucket is refined because drifts of paths
/// with a very short length make the discrete sum converge slowly there.
const FIRST_STEPS: usize = 1000;
const STEPS: usize = 100;

fn innovation_grid() -> Result<TimeGrid> {
    let width = HORIZON / BUCKETS as f64;
    let mut times: Vec<f64> = (0..FIRST_STEPS).map(|i| i as f64 * width / FIRST_STEPS as f64).collect();
    for j in 1..BUCKETS {
        times.extend((0..STEPS).map(|i| (j as f64 + i as f64 / STEPS as f64) * width));
    }
    times.push(HORIZON);
    TimeGrid::new(times)
}

fn bucket_of(s: f64) -> usize {
    ((s * BUCKETS as f64 / HORIZON + 1e-9) as usize).min(BUCKETS - 1)
}
const KS_TIMES: [f64; 3] = [1.0, 2.5, 5.0];

#[derive(Clone, Copy, Default)]
struct Bucket {
    /// Increment minus the exact one-step conditional mean.
    compensated: MeanAcc,
    /// Increment minus drift times step, drift at the left point.
    left_point: MeanAcc,
    /// Per path: sum of squared compensated increments over the bucket width.
    /// Accumulated per path because absorption makes steps of one path
    /// dependent.
    square: MeanAcc,
}

fn merge(a: &mut [Bucket], b: &[Bucket]) {
    for (x, y) in a.iter_mut().zip(b) {
        x.compensated.merge(&y.compensated);
        x.left_point.merge(&y.left_point);
        x.square.merge(&y.square);
    }
}

fn innovation_buckets(model: &InfoModel, n: usize, seed: u64) -> Result<Vec<Bucket>> {
    let grid = innovation_grid()?;
    let paths = exact_paths(&model.as_random_bridge(), &grid, n, seed, false);
    let opts = EulerOptions::default();
    let per_path: Vec<Vec<Bucket>> = paths
        .par_iter()
        .map(|p| -> Result<Vec<Bucket>> {
            let mut out = vec![Bucket::default(); BUCKETS];
            let mut squares = [0.0; BUCKETS];
            for k in 0..p.times.len() - 1 {
                let (s, h) = (p.times[k], p.times[k + 1] - p.times[k]);
                let j = bucket_of(s);
                let b = &mut out[j];
                if p.is_absorbed_at(k) {
                    continue;
                }
                let x = p.values[k];
                let dx = p.values[k + 1] - x;
                let law = step_law(model, s, x, h, &opts)?;
                let di = dx - law.mean_increment;
                b.compensated.push(di);
                squares[j] += di * di;
                if law.drift.is_finite() {
                    b.left_point.push(dx - law.drift * h);
                }
            }
            for (b, q) in out.iter_mut().zip(squares) {
                b.square.push(q / (HORIZON / BUCKETS as f64));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![Bucket::default(); BUCKETS];
    for p in &per_path {
        merge(&mut total, p);
    }
    Ok(total)
}

/// `λ` with `P(K > λ) = alpha` for the Kolmogorov distribution.
fn ks_critical(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ks_case(name: String, a: &[f64], b: &[f64], crit: f64) -> TestCase {
    let r = ks_two_sample(a, b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let se = ((na + nb) / (na * nb)).sqrt();
    TestCase::statistical(name, r.statistic, se, 0.0, crit, Rule::Agree, (a.len() + b.len()) as u64)
}

/// Innovation increments have conditional mean zero and variance profile
/// `h P(s < τ)`; Euler paths match the exact construction in law.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let model = two_pin_model();
    let buckets = innovation_buckets(&model, cfg.paths(2_000, 200), cfg.seed)?;
    let width = HORIZON / BUCKETS as f64;
    let thr = agree_threshold(BUCKETS);
    let mut cases = Vec::new();
    for (j, b) in buckets.iter().enumerate() {
        let (lo, hi) = (j as f64 * width, (j + 1) as f64 * width);
        let c = &b.compensated;
        cases.push(TestCase::statistical(
            format!("innovation mean on [{lo}, {hi})"),
            c.mean(),
            c.stderr(),
            0.0,
            thr,
            Rule::Agree,
            c.n,
        ));
        let l = &b.left_point;
        cases.push(TestCase::info(
            format!("left-point drift residual on [{lo}, {hi})"),
            l.mean(),
            l.stderr(),
            0.0,
            l.n,
        ));
        let n = if j == 0 { FIRST_STEPS } else { STEPS };
        let h = width / n as f64;
        let survival: f64 = (0..n).map(|i| model.length().survival(lo + (i as f64 + 0.5) * h)).sum::<f64>() / n as f64;
        let q = &b.square;
        cases.push(TestCase::statistical(
            format!("innovation variance per unit time on [{lo}, {hi})"),
            q.mean(),
            q.stderr(),
            survival,
            thr,
            Rule::Agree,
            q.n,
        ));
    }

    let n = cfg.paths(10_000, 500);
    let ks_grid = TimeGrid::uniform(5.0, 500)?;
    let euler = euler_paths(&model, &ks_grid, n, cfg.seed ^ 0xe1, &EulerOptions::default())?;
    let exact = exact_paths(&model.as_random_bridge(), &ks_grid, n, cfg.seed ^ 0xe2, false);
    let capped: usize = euler.iter().map(|r| r.capped_steps).sum();
    let crit = ks_critical(FAMILY_LEVEL / (KS_TIMES.len() + 1) as f64);
    for &t in &KS_TIMES {
        let k = ks_grid.first_at_or_after(t).expect("time on grid");
        let a: Vec<f64> = euler.iter().map(|r| r.path.values[k]).collect();
        let b: Vec<f64> = exact.iter().map(|p| p.values[k]).collect();
        cases.push(ks_case(format!("Euler vs exact marginal at t = {t} (scaled KS)"), &a, &b, crit));
    }
    cases.push(TestCase::info("Euler steps with capped drift", capped as f64, 0.0, 0.0, n as u64));

    let spec = BridgeSpec::new(1.0, 0.7)?;
    let grid = TimeGrid::uniform(1.0, 1000)?;
    let mid = grid.first_at_or_after(0.5).expect("on grid");
    let m = cfg.paths(10_000, 500);
    let a: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| euler_bridge(&spec, &grid, &mut rng_stream(cfg.seed ^ 0xb1, i as u64)).map(|r| r.path.values[mid]))
        .collect::<Result<_>>()?;
    let b: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| sample_bridge(&spec, &grid, &mut rng_stream(cfg.seed ^ 0xb2, i as u64)).values[mid])
        .collect();
    cases.push(ks_case("bridge Euler vs exact marginal at half length (scaled KS)".into(), &a, &b, crit));
    Ok(cases)
}
