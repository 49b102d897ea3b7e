use crate::conditional::McEstimate;
use crate::report::{Rule, SuiteConfig, TestCase, TestReport};
use crate::stats::bonferroni_threshold;
use distributions::{LengthLaw, PinLaw};
use gaussian_core::{Error, Result};
use info_process::InfoModel;
use random_bridge::RandomBridgeModel;

mod continuity;
mod drift;
mod innovation;
mod markov;
mod modification;
mod non_markov;
mod posterior;
mod transition;

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = [
    "modification",
    "markov_discrete",
    "non_markov_continuous",
    "transition_info",
    "posterior_info",
    "drift",
    "innovation",
    "right_continuity",
];

/// Family level for multiple-testing control within a suite.
pub(crate) const FAMILY_LEVEL: f64 = 0.01;

/// z threshold for `m` agreement tests: Bonferroni at the family level, and
/// never below three standard errors.
pub(crate) fn agree_threshold(m: usize) -> f64 {
    bonferroni_threshold(FAMILY_LEVEL, m).max(3.0)
}

pub(crate) fn mc_case(
    name: impl Into<String>,
    est: &McEstimate,
    reference: f64,
    threshold: f64,
    rule: Rule,
) -> TestCase {
    TestCase::statistical(name, est.estimate, est.stderr, reference, threshold, rule, est.samples)
}

/// Exponential(0.1) length with pins -4 (probability 0.3) and 4.
pub(crate) fn two_pin_model() -> InfoModel {
    InfoModel::new(LengthLaw::exponential(0.1).expect("valid"), -4.0, 4.0, 0.3).expect("valid")
}

pub(crate) fn exponential_bridge(pin: PinLaw) -> RandomBridgeModel {
    RandomBridgeModel::new(LengthLaw::exponential(0.1).expect("valid"), pin)
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<TestReport> {
    let (theorem, cases) = match name {
        "modification" => ("bridge equals its pin from the random length onwards", modification::run(cfg)?),
        "markov_discrete" => ("Markov property of the random bridge with a discrete pin", markov::run(cfg)?),
        "non_markov_continuous" => ("failure of the Markov property with a continuous pin", non_markov::run(cfg)?),
        "transition_info" => ("transition kernel of the information process", transition::run(cfg)?),
        "posterior_info" => ("absorption time is a stopping time; filtering formulas", posterior::run(cfg)?),
        "drift" => ("semimartingale decomposition: drift", drift::run(cfg)?),
        "innovation" => ("semimartingale decomposition: innovation and simulation", innovation::run(cfg)?),
        "right_continuity" => ("right-continuity of conditional expectations", continuity::run(cfg)?),
        other => return Err(Error::Config(format!("unknown suite '{other}', expected one of {}", SUITES.join(", ")))),
    };
    Ok(TestReport {
        suite: name.to_string(),
        theorem: theorem.to_string(),
        cases,
        seed: cfg.seed,
        config_hash: cfg.hash(name),
    })
}
