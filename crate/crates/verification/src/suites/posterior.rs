use super::{agree_threshold, mc_case, two_pin_model};
use crate::conditional::{mc_conditional_many, Bin, ConditioningSpec, Draw, McEstimate, Query};
use crate::paths::exact_paths;
use crate::report::{Rule, SuiteConfig, TestCase};
use deterministic_bridge::TimeGrid;
use distributions::LengthLaw;
use gaussian_core::Result;
use info_process::{info_filter_state, info_posterior, InfoModel};
use rayon::prelude::*;

/// Counts grid points where the filter's settled probability disagrees
/// with whether the path has been absorbed, and absorbed points where the
/// pin posterior misses the realized pin.
fn absorption_mismatches(model: &InfoModel, n: usize, seed: u64) -> Result<(u64, u64)> {
    let grid = TimeGrid::uniform(30.0, 60)?;
    let paths = exact_paths(&model.as_random_bridge(), &grid, n, seed, false);
    let counts: Vec<(u64, u64)> = paths
        .par_iter()
        .map(|p| -> Result<(u64, u64)> {
            let mut bad = 0;
            for k in 1..p.times.len() {
                let v = p.values[k];
                let st = info_filter_state(model, p.times[k], v, model.pin_index(v).is_some())?;
                let absorbed = p.is_absorbed_at(k);
                let expect_pin = model.pin_index(p.realized_pin).map(|i| if i == 0 { [1.0, 0.0] } else { [0.0, 1.0] });
                let settled_ok = st.prob_settled == if absorbed { 1.0 } else { 0.0 };
                let pin_ok = !absorbed || Some(st.pin_probs) == expect_pin;
                if !(settled_ok && pin_ok) {
                    bad += 1;
                }
            }
            Ok((bad, p.times.len() as u64 - 1))
        })
        .collect::<Result<_>>()?;
    Ok(counts.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)))
}

/// Absorption detection along simulated paths, the symmetric pin posterior,
/// and binned Monte Carlo checks of the filter.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let model = two_pin_model();
    let (bad, total) = absorption_mismatches(&model, cfg.paths(10_000, 1_000), cfg.seed)?;
    let mut cases =
        vec![TestCase::statistical("absorption mismatches", bad as f64, 0.0, 0.0, 0.0, Rule::Within, total)];

    let sym = InfoModel::new(LengthLaw::exponential(0.3)?, -2.0, 2.0, 0.5)?;
    for t in [0.5, 1.0, 3.0, 10.0] {
        let p = info_filter_state(&sym, t, 0.0, false)?.pin_probs[0];
        cases.push(TestCase::within(format!("symmetric pin posterior at t = {t}"), p, 0.5, 1e-10));
    }

    let (t, x) = (5.0, 1.0);
    let z2 = model.pins()[1];
    let n = cfg.paths(1_000_000, 10_000);
    let spec = || ConditioningSpec::new(vec![t], vec![Bin::Near { center: x, eps: 0.1 }]);
    let pin_target = move |d: &Draw| f64::from(u8::from(d.pin == z2));
    let len_target = |d: &Draw| f64::from(u8::from(d.length <= 10.0));
    let queries = [Query { spec: spec()?, target: &pin_target }, Query { spec: spec()?, target: &len_target }];
    let est: Vec<McEstimate> = mc_conditional_many(&model.as_random_bridge(), &[], &queries, n, cfg.seed ^ 0x5eed)?
        .into_iter()
        .collect::<Result<_>>()?;
    let thr = agree_threshold(2);
    let pin_ref = info_posterior(&model, t, x, false, |_, z| f64::from(u8::from(z == z2)))?;
    let len_ref = info_posterior(&model, t, x, false, |r, _| f64::from(u8::from(r <= 10.0)))?;
    cases.push(mc_case("P(second pin | value 1 at time 5)", &est[0], pin_ref, thr, Rule::Agree));
    cases.push(mc_case("P(length ≤ 10 | value 1 at time 5)", &est[1], len_ref, thr, Rule::Agree));
    Ok(cases)
}
