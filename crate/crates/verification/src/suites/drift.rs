use super::{agree_threshold, mc_case, two_pin_model};
use crate::conditional::{mc_conditional_many, Bin, ConditioningSpec, Draw, McEstimate, Query};
use crate::report::{Rule, SuiteConfig, TestCase};
use gaussian_core::Result;
use info_process::info_drift;

const TIMES: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];
const VALUES: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
/// Finite-difference step.
const DELTA: f64 = 1e-3;
const EPS: f64 = 0.1;

/// Finite-difference drift `E[ξ_{s+Δ} - ξ_s | ξ_s ≈ x, s < τ] / Δ` against
/// the closed form. The bridge noise is integrated out given the hidden
/// length and pin: the increment has mean `(Z - x) Δ / (τ - s)` when
/// `τ > s + Δ` and equals `Z - x` otherwise.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let model = two_pin_model();
    let n = cfg.paths(1_000_000, 10_000);
    let targets: Vec<_> = TIMES
        .iter()
        .map(|&s| move |d: &Draw| (d.pin - d.value_at(s)) * (1.0 / DELTA).min(1.0 / (d.length - s)))
        .collect();
    let mut queries = Vec::new();
    let mut labels = Vec::new();
    for (i, &s) in TIMES.iter().enumerate() {
        for &x in &VALUES {
            let spec = ConditioningSpec::new(vec![s], vec![Bin::Near { center: x, eps: EPS }])?;
            queries.push(Query { spec, target: &targets[i] });
            labels.push((s, x));
        }
    }
    let est: Vec<McEstimate> = mc_conditional_many(&model.as_random_bridge(), &[], &queries, n, cfg.seed)?
        .into_iter()
        .collect::<Result<_>>()?;
    let thr = agree_threshold(queries.len());
    labels
        .iter()
        .zip(&est)
        .map(|(&(s, x), e)| {
            let b = cfg.drift_scale * info_drift(&model, s, x, false)?;
            Ok(mc_case(format!("drift at s = {s}, x = {x}"), e, b, thr, Rule::Agree))
        })
        .collect()
}
