use crate::filter::info_predict;
use crate::model::{InfoModel, Observation};
use distributions::quadrature::QuadOptions;
use gaussian_core::{Error, Result};
use random_bridge::Payoff;

/// `E[g(τ, Z, ξ_u)]` with no observation.
pub fn unconditional_expectation(model: &InfoModel, u: f64, payoff: &dyn Payoff) -> Result<f64> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("prediction time must be positive, got {u}")));
    }
    let pins = model.pins();
    let probs = model.probs();
    let v = model.length().integrate_range(
        0.0,
        f64::INFINITY,
        0.0,
        &[u],
        |r, _| {
            let mut acc = 0.0;
            for (&z, &p) in pins.iter().zip(&probs) {
                acc += p * if r <= u {
                    payoff.value(r, z, z)
                } else {
                    payoff.gauss_expect(r, z, u * z / r, u * (r - u) / r)
                };
            }
            [acc]
        },
        &QuadOptions::default(),
    )?;
    Ok(v.value[0])
}

/// Conditional expectations along observations approaching a time from the
/// right, and their distance from the value at that time.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub values: Vec<f64>,
    pub reference: f64,
    pub gaps: Vec<f64>,
}

/// Evaluates `E[g(ξ_u) | ξ_{t_n} = x_n]` for each observation and compares
/// with the value given the `start` observation, or the unconditional value
/// when `start` is `None` (time zero). Time zero requires the length to be
/// bounded away from zero.
pub fn right_continuity_probe(
    model: &InfoModel,
    u: f64,
    payoff: &dyn Payoff,
    start: Option<Observation>,
    approach: &[Observation],
) -> Result<ProbeResult> {
    let reference = match start {
        Some(o) => info_predict(model, o.time, o.value, o.absorbed, u, payoff)?,
        None => {
            if !(model.length().lower_bound() > 0.0) {
                return Err(Error::Precondition(
                    "continuity at time zero needs a length bounded away from zero".into(),
                ));
            }
            unconditional_expectation(model, u, payoff)?
        }
    };
    let values = approach
        .iter()
        .map(|o| info_predict(model, o.time, o.value, o.absorbed, u, payoff))
        .collect::<Result<Vec<_>>>()?;
    let gaps = values.iter().map(|v| (v - reference).abs()).collect();
    Ok(ProbeResult { values, reference, gaps })
}
