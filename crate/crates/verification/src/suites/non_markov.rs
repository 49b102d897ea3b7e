use super::mc_case;
use crate::conditional::{mc_conditional_many, Bin, ConditioningSpec, Draw, Query};
use crate::report::{Rule, SuiteConfig, TestCase};
use distributions::{LengthLaw, PinLaw};
use gaussian_core::Result;
use random_bridge::{non_markov_gap, Observable, RandomBridgeModel};

const LENGTHS: (f64, f64) = (1.0, 2.0);
const T1: f64 = 0.5;
const T2: f64 = 1.5;
const U: f64 = 2.5;
const EPS: f64 = 0.05;
/// Main conditioning point: low joint density cost is repaid by a large gap.
const MAIN: (f64, f64) = (-1.0, 0.3);
/// Secondary point with a small gap; reported only.
const SECONDARY: (f64, f64) = (0.8, 0.3);

/// With a Gaussian pin and two possible lengths, conditioning on an earlier
/// value changes the prediction: the Monte Carlo estimate must match the
/// two-time closed form and reject the one-time (Markov) prediction.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let pin = PinLaw::standard_normal();
    let model = RandomBridgeModel::new(LengthLaw::two_point(LENGTHS.0, LENGTHS.1, 0.5)?, pin.clone());
    let g = Observable::Above(0.0);
    let n = cfg.paths(20_000_000, 10_000);
    let target = |d: &Draw| f64::from(u8::from(d.value_at(U) > 0.0));
    let spec = |(x1, x2): (f64, f64)| {
        ConditioningSpec::new(
            vec![T1, T2],
            vec![Bin::Near { center: x1, eps: EPS }, Bin::Near { center: x2, eps: EPS }],
        )
    };
    let queries = [Query { spec: spec(MAIN)?, target: &target }, Query { spec: spec(SECONDARY)?, target: &target }];
    let mut est = mc_conditional_many(&model, &[U], &queries, n, cfg.seed)?.into_iter();
    let main = est.next().expect("two queries")?;
    let secondary = est.next().expect("two queries");

    let gap = non_markov_gap(&pin, LENGTHS, T1, T2, U, MAIN.0, MAIN.1, &g)?;
    let mut cases = vec![
        TestCase::statistical("closed-form gap magnitude", gap.gap.abs(), 0.0, 0.0, 1e-3, Rule::Exceeds, 0),
        mc_case("Monte Carlo vs two-time closed form", &main, gap.lhs, 3.0, Rule::Agree),
        mc_case("Monte Carlo vs one-time prediction", &main, gap.rhs, 5.0, Rule::Reject),
    ];
    let side = non_markov_gap(&pin, LENGTHS, T1, T2, U, SECONDARY.0, SECONDARY.1, &g)?;
    match secondary {
        Ok(e) => {
            cases.push(TestCase::info(
                "secondary point vs two-time closed form",
                e.estimate,
                e.stderr,
                side.lhs,
                e.samples,
            ));
            cases.push(TestCase::info(
                "secondary point vs one-time prediction",
                e.estimate,
                e.stderr,
                side.rhs,
                e.samples,
            ));
        }
        Err(_) => cases.push(TestCase::info("secondary point: too few samples", f64::NAN, f64::NAN, side.lhs, 0)),
    }
    Ok(cases)
}
