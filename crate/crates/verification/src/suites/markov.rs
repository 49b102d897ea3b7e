use super::{agree_threshold, mc_case, two_pin_model};
use crate::conditional::{mc_conditional_many, Bin, ConditioningSpec, Draw, McEstimate, Query};
use crate::report::{Rule, SuiteConfig, TestCase};
use gaussian_core::Result;
use info_process::info_predict;
use random_bridge::Observable;

const T1: f64 = 2.0;
const T2: f64 = 4.0;
const U: f64 = 6.0;
const PRESENT: [f64; 3] = [-1.0, 0.0, 1.0];
const EPS: f64 = 0.1;
/// History bins for the value at the earlier time.
const HISTORY: [(f64, f64); 3] = [(f64::NEG_INFINITY, -0.5), (-0.5, 0.5), (0.5, f64::INFINITY)];

/// With a two-point pin the law of `ζ_u` given `ζ_{t2}` must not depend on
/// `ζ_{t1}`: estimates in different history bins are compared pairwise, and
/// the pooled estimate against the one-time predictive.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let model = two_pin_model();
    let bridge = model.as_random_bridge();
    let n = cfg.paths(1_000_000, 10_000);
    let target = |d: &Draw| f64::from(u8::from(d.value_at(U) > 0.0));
    let mut queries = Vec::new();
    for &x in &PRESENT {
        let near = Bin::Near { center: x, eps: EPS };
        queries.push(Query { spec: ConditioningSpec::new(vec![T2], vec![near])?, target: &target });
        for &(lo, hi) in &HISTORY {
            let spec = ConditioningSpec::new(vec![T1, T2], vec![Bin::Range { lo, hi }, near])?;
            queries.push(Query { spec, target: &target });
        }
    }
    let est: Vec<McEstimate> =
        mc_conditional_many(&bridge, &[U], &queries, n, cfg.seed)?.into_iter().collect::<Result<_>>()?;
    let m = PRESENT.len() * (1 + HISTORY.len());
    let thr = agree_threshold(m);
    let mut cases = Vec::new();
    for (i, &x) in PRESENT.iter().enumerate() {
        let block = &est[4 * i..4 * i + 4];
        let reference = info_predict(&model, T2, x, false, U, &Observable::Above(0.0))?;
        cases.push(mc_case(format!("present {x}: pooled vs predictive"), &block[0], reference, thr, Rule::Agree));
        for a in 1..4 {
            for b in a + 1..4 {
                let (ea, eb) = (&block[a], &block[b]);
                let se = (ea.stderr.powi(2) + eb.stderr.powi(2)).sqrt();
                cases.push(TestCase::statistical(
                    format!("present {x}: history bin {} vs {}", a - 1, b - 1),
                    ea.estimate - eb.estimate,
                    se,
                    0.0,
                    thr,
                    Rule::Agree,
                    ea.samples + eb.samples,
                ));
            }
        }
    }
    Ok(cases)
}
