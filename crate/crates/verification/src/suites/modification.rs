use super::exponential_bridge;
use crate::conditional::{mc_conditional_many, ConditioningSpec, Draw, Query};
use crate::report::{Rule, SuiteConfig, TestCase};
use distributions::PinLaw;
use gaussian_core::Result;

const TIMES: [f64; 5] = [2.0, 5.0, 10.0, 20.0, 40.0];

type BoxedTarget = Box<dyn Fn(&Draw) -> f64 + Sync>;

/// Frequency of `ζ_t = Z` against `F_τ(t)` for both pin laws.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let n = cfg.paths(100_000, 10_000);
    let laws = [("binomial", PinLaw::binomial(3, 0.5)?), ("normal", PinLaw::standard_normal())];
    let targets: Vec<BoxedTarget> = TIMES
        .iter()
        .map(|&t| Box::new(move |d: &Draw| f64::from(u8::from(d.value_at(t) == d.pin))) as BoxedTarget)
        .collect();
    let mut cases = Vec::new();
    for (k, (label, pin)) in laws.into_iter().enumerate() {
        let model = exponential_bridge(pin);
        let queries: Vec<Query> =
            targets.iter().map(|t| Query { spec: ConditioningSpec::unconditional(), target: t.as_ref() }).collect();
        let est = mc_conditional_many(&model, &TIMES, &queries, n, cfg.seed.wrapping_add(k as u64))?;
        for (&t, e) in TIMES.iter().zip(est) {
            let e = e?;
            let f = model.length().cdf(t);
            let se = (f * (1.0 - f) / n as f64).sqrt();
            cases.push(TestCase::statistical(
                format!("{label} pin, t = {t}"),
                e.estimate,
                se,
                f,
                3.0,
                Rule::Agree,
                e.samples,
            ));
        }
    }
    Ok(cases)
}
