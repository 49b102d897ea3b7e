use super::two_pin_model;
use crate::report::{SuiteConfig, TestCase};
use distributions::LengthLaw;
use gaussian_core::{PathRng, Result};
use info_process::{right_continuity_probe, InfoModel, Observation};
use random_bridge::Observable;

const DEPTH: i32 = 20;
const PATHS: u64 = 3;

/// Observations `t* + 2^-n` for `n = DEPTH..1` along stored exact paths
/// alive at `t* + 1/2`; returns the gap at the finest time for each path.
fn gaps(model: &InfoModel, start: f64, u: f64, seed: u64, at_zero: bool) -> Result<Vec<f64>> {
    let g = Observable::Logistic { center: 0.0, scale: 1.0 };
    let mut times: Vec<f64> = (1..=DEPTH).rev().map(|n| start + 2f64.powi(-n)).collect();
    if !at_zero {
        times.insert(0, start);
    }
    times.insert(0, 0.0);
    let bridge = model.as_random_bridge();
    let mut values = vec![0.0; times.len()];
    let mut out = Vec::new();
    let mut block = 0;
    while (out.len() as u64) < PATHS {
        let s = bridge.sample_into(&times, &mut PathRng::new(seed, block), &mut values);
        block += 1;
        if s.absorb_index.is_some() {
            continue;
        }
        let skip = if at_zero { 1 } else { 2 };
        let obs: Vec<_> =
            times.iter().zip(&values).skip(skip).map(|(&t, &v)| Observation::classify(model, t, v)).collect();
        let first = (!at_zero).then(|| Observation::classify(model, start, values[1]));
        let res = right_continuity_probe(model, u, &g, first, &obs)?;
        out.push(res.gaps[0]);
    }
    Ok(out)
}

/// `E[g(ξ_u) | ξ_t]` along observations approaching `t*` from the right
/// converges to the value at `t*`, for `t* = 1` and for `t* = 0` with
/// lengths bounded away from zero.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let mut cases = Vec::new();
    for (i, gap) in gaps(&two_pin_model(), 1.0, 3.0, cfg.seed, false)?.into_iter().enumerate() {
        cases.push(TestCase::within(format!("path {i}: gap at 1 + 2^-{DEPTH}"), gap, 0.0, 1e-3));
    }
    let shifted = InfoModel::new(LengthLaw::shifted_exponential(0.1, 0.5)?, -4.0, 4.0, 0.3)?;
    for (i, gap) in gaps(&shifted, 0.0, 2.0, cfg.seed ^ 1, true)?.into_iter().enumerate() {
        cases.push(TestCase::within(format!("path {i}: gap at 2^-{DEPTH} (lengths above 0.5)"), gap, 0.0, 1e-3));
    }
    Ok(cases)
}
