use super::{agree_threshold, mc_case, two_pin_model};
use crate::conditional::{mc_conditional_many, Bin, ConditioningSpec, Draw, McEstimate, Query};
use crate::report::{Rule, SuiteConfig, TestCase};
use distributions::quadrature::{integrate, QuadOptions};
use distributions::LengthLaw;
use gaussian_core::{Error, Result};
use info_process::{info_predict, info_transition, InfoModel};
use random_bridge::Observable;

const T: f64 = 2.0;
const X: f64 = 1.0;
const U: f64 = 4.0;
const EPS: f64 = 0.1;
const POINTS: [f64; 3] = [-1.0, 1.0, 3.0];
const HALF: f64 = 0.1;

fn normalization_cases() -> Result<Vec<TestCase>> {
    let mut cases = Vec::new();
    let mut k = 0;
    for length in [
        LengthLaw::exponential(0.1)?,
        LengthLaw::two_point(1.5, 4.0, 0.4)?,
        LengthLaw::uniform(0.5, 5.0)?,
        LengthLaw::shifted_exponential(0.5, 1.0)?,
    ] {
        for &(t, x, u) in &[(0.5, 0.2, 1.0), (1.0, -0.7, 3.0), (2.0, 1.5, 2.5), (0.3, 0.0, 6.0), (3.0, -2.0, 3.1)] {
            let model =
                InfoModel::new(length.clone(), -2.0 - 0.5 * k as f64, 1.0 + 0.3 * k as f64, 0.2 + 0.03 * k as f64)?;
            let mass = info_transition(&model, t, x, false, u)?.total_mass()?;
            cases.push(TestCase::within(format!("kernel mass #{k} ({t}, {x}) -> {u}"), mass, 1.0, 1e-6));
            k += 1;
        }
    }
    Ok(cases)
}

/// Atom weights and binned density of `ξ_u` given `ξ_t ≈ x` against the
/// kernel; normalization over a sweep; Chapman–Kolmogorov; dependence on
/// the start time at equal lag.
pub(super) fn run(cfg: &SuiteConfig) -> Result<Vec<TestCase>> {
    let model = two_pin_model();
    let [z1, z2] = model.pins();
    let kernel = info_transition(&model, T, X, false, U)?;
    let n = cfg.paths(1_000_000, 10_000);
    let near = || ConditioningSpec::new(vec![T], vec![Bin::Near { center: X, eps: EPS }]);
    let at_z1 = move |d: &Draw| f64::from(u8::from(d.value_at(U) == z1));
    let at_z2 = move |d: &Draw| f64::from(u8::from(d.value_at(U) == z2));
    let bins: Vec<_> = POINTS
        .iter()
        .map(|&y| {
            move |d: &Draw| f64::from(u8::from(!d.absorbed_at(U) && (d.value_at(U) - y).abs() <= HALF)) / (2.0 * HALF)
        })
        .collect();
    let mut queries = vec![Query { spec: near()?, target: &at_z1 }, Query { spec: near()?, target: &at_z2 }];
    for b in &bins {
        queries.push(Query { spec: near()?, target: b });
    }
    let est: Vec<McEstimate> = mc_conditional_many(&model.as_random_bridge(), &[U], &queries, n, cfg.seed)?
        .into_iter()
        .collect::<Result<_>>()?;
    let thr = agree_threshold(est.len());
    let mut cases = vec![
        mc_case("atom at first pin", &est[0], kernel.atoms()[0], thr, Rule::Agree),
        mc_case("atom at second pin", &est[1], kernel.atoms()[1], thr, Rule::Agree),
    ];
    for (i, &y) in POINTS.iter().enumerate() {
        let mut err = None;
        let avg = integrate(
            |v| {
                kernel.lebesgue(v).unwrap_or_else(|e| {
                    err.get_or_insert(e);
                    0.0
                })
            },
            &[y - HALF, y + HALF],
            &QuadOptions::with_epsrel(1e-9),
        )?
        .value
            / (2.0 * HALF);
        if let Some(e) = err {
            return Err(e);
        }
        cases.push(mc_case(format!("density averaged over {y} ± {HALF}"), &est[2 + i], avg, thr, Rule::Agree));
    }

    cases.extend(normalization_cases()?);

    let early = info_transition(&model, 1.0, 2.0, false, 2.0)?;
    let late = info_transition(&model, 5.0, 2.0, false, 6.0)?;
    cases.push(TestCase::statistical(
        "second-pin atom from value 2, lag 1, start 1 vs 5",
        (early.atoms()[1] - late.atoms()[1]).abs(),
        0.0,
        0.0,
        1e-3,
        Rule::Exceeds,
        0,
    ));

    let g = Observable::Logistic { center: 0.0, scale: 1.0 };
    let (t, x, s, u) = (1.0, 0.5, 2.5, 4.0);
    let direct = info_predict(&model, t, x, false, u, &g)?;
    let mid = info_transition(&model, t, x, false, s)?;
    let mut err: Option<Error> = None;
    let composed = mid.expect(
        |y| {
            info_predict(&model, s, y, model.pin_index(y).is_some(), u, &g).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        },
        &[],
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    cases.push(TestCase::within("Chapman-Kolmogorov composition", composed, direct, 1e-4));
    Ok(cases)
}
