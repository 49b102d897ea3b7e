use crate::model::InfoModel;
use crate::phi::{log_scale, phi_integrals};
use deterministic_bridge::transition_moments;
use distributions::quadrature::QuadOptions;
use gaussian_core::{Error, Result};
use random_bridge::Payoff;

/// Summary of the filter at one observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterState {
    /// `P(τ ≤ t | F_t)`.
    pub prob_settled: f64,
    /// `P(Z = z_i | F_t)`.
    pub pin_probs: [f64; 2],
    /// Drift of the process at the observation; zero once absorbed.
    pub drift: f64,
}

pub(crate) fn absorbed_pin(model: &InfoModel, x: f64) -> Result<usize> {
    model.pin_index(x).ok_or_else(|| Error::Input(format!("absorbed observation {x} does not equal a pin")))
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("observation time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

fn check_start(t: f64, x: f64, absorbed: bool) -> Result<()> {
    if t == 0.0 && (x != 0.0 || absorbed) {
        return Err(Error::Input(format!("the process starts at 0, got {x} at time 0")));
    }
    Ok(())
}

/// `∫_(0,t] g(r) P(dr) / F(t)`: the length posterior after absorption.
fn settled_average<G: Fn(f64) -> f64>(model: &InfoModel, t: f64, g: G) -> Result<f64> {
    let v = model.length().integrate_range(0.0, t, 0.0, &[], |r, _| [g(r), 1.0], &QuadOptions::default())?;
    if !(v.value[1] > 0.0) {
        return Err(Error::Inference(format!("absorbed by time {t} but the length has no mass on (0, {t}]")));
    }
    Ok(v.value[0] / v.value[1])
}

/// Posterior expectation `E[g(τ, Z) | ξ_t = x]`. The absorbed flag must be
/// set for observations equal to a pin and reached by absorption; for a
/// non-absorbed observation the pins carry no special meaning.
pub fn info_posterior<G: Fn(f64, f64) -> f64>(model: &InfoModel, t: f64, x: f64, absorbed: bool, g: G) -> Result<f64> {
    check_time(t)?;
    check_start(t, x, absorbed)?;
    if absorbed {
        let z = model.pins()[absorbed_pin(model, x)?];
        return settled_average(model, t, |r| g(r, z));
    }
    let [z1, z2] = model.pins();
    let [p1, p2] = model.probs();
    let scale = log_scale(model, t, x);
    let v = phi_integrals(model, t, x, t, f64::INFINITY, &[], scale, &QuadOptions::default(), |r, _, e| {
        let (a, b) = (p1 * e[0], p2 * e[1]);
        [a * g(r, z1) + b * g(r, z2), a + b]
    })?;
    if !(v.value[1] > 0.0) {
        return Err(Error::Inference(format!("observation {x} at time {t} has zero likelihood")));
    }
    Ok(v.value[0] / v.value[1])
}

/// Settled probability, pin probabilities and drift in one pass.
pub fn info_filter_state(model: &InfoModel, t: f64, x: f64, absorbed: bool) -> Result<FilterState> {
    check_time(t)?;
    check_start(t, x, absorbed)?;
    if absorbed {
        let i = absorbed_pin(model, x)?;
        settled_average(model, t, |_| 1.0)?;
        let mut pin_probs = [0.0; 2];
        pin_probs[i] = 1.0;
        return Ok(FilterState { prob_settled: 1.0, pin_probs, drift: 0.0 });
    }
    let [p1, p2] = model.probs();
    let sums = crate::drift::drift_sums(model, t, x)?;
    let d = p1 * sums.den[0] + p2 * sums.den[1];
    let pin_probs = [p1 * sums.den[0] / d, p2 * sums.den[1] / d];
    Ok(FilterState { prob_settled: 0.0, pin_probs, drift: sums.drift(model, x) })
}

/// `E[g(τ, Z, ξ_u) | ξ_t = x]` for `u ≥ t`, integrating the Gaussian bridge
/// value at `u` when `τ > u`.
pub fn info_predict(model: &InfoModel, t: f64, x: f64, absorbed: bool, u: f64, payoff: &dyn Payoff) -> Result<f64> {
    check_time(t)?;
    check_start(t, x, absorbed)?;
    if !(u >= t && u.is_finite()) {
        return Err(Error::Domain(format!("prediction time {u} precedes observation time {t}")));
    }
    if absorbed {
        let z = model.pins()[absorbed_pin(model, x)?];
        return settled_average(model, t, |r| payoff.value(r, z, z));
    }
    let pins = model.pins();
    let [p1, p2] = model.probs();
    let scale = log_scale(model, t, x);
    let v = phi_integrals(model, t, x, t, f64::INFINITY, &[u], scale, &QuadOptions::default(), |r, _, e| {
        let mut num = 0.0;
        for (i, &z) in pins.iter().enumerate() {
            let w = model.probs()[i] * e[i];
            if w == 0.0 {
                continue;
            }
            let g = if r <= u {
                payoff.value(r, z, z)
            } else {
                let (var, mean) = transition_moments(r, z, t, x, u);
                payoff.gauss_expect(r, z, mean, var)
            };
            num += w * g;
        }
        [num, p1 * e[0] + p2 * e[1]]
    })?;
    if !(v.value[1] > 0.0) {
        return Err(Error::Inference(format!("observation {x} at time {t} has zero likelihood")));
    }
    Ok(v.value[0] / v.value[1])
}
