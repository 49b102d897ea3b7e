use crate::filter::absorbed_pin;
use crate::model::InfoModel;
use crate::phi::{log_scale, phi_integrals};
use distributions::quadrature::QuadOptions;
use gaussian_core::{Error, Result};

/// Scaled `D_i = ∫ φ_s^i P(dr)` and `N_i = ∫ φ_s^i / (r - s) P(dr)` over `(s, ∞)`.
pub(crate) struct DriftSums {
    pub den: [f64; 2],
    pub num: [f64; 2],
    /// `E[1/τ]` is infinite at time zero.
    pub diverges: bool,
}

impl DriftSums {
    /// `Σ p_i (z_i - x) N_i / Σ p_i D_i`, with the sign of each term carried
    /// by `z_i - x` outside the integral.
    pub fn drift(&self, model: &InfoModel, x: f64) -> f64 {
        let p = model.probs();
        let z = model.pins();
        if self.diverges {
            let m = p[0] * (z[0] - x) + p[1] * (z[1] - x);
            return if m == 0.0 { 0.0 } else { m.signum() * f64::INFINITY };
        }
        let top = p[0] * (z[0] - x) * self.num[0] + p[1] * (z[1] - x) * self.num[1];
        top / (p[0] * self.den[0] + p[1] * self.den[1])
    }
}

pub(crate) fn drift_sums(model: &InfoModel, s: f64, x: f64) -> Result<DriftSums> {
    if s == 0.0 && model.length().lower_bound() == 0.0 {
        // E[1/τ] diverges; only the sign of the drift survives.
        return Ok(DriftSums { den: [1.0, 1.0], num: [f64::INFINITY; 2], diverges: true });
    }
    let scale = log_scale(model, s, x);
    let v = phi_integrals(model, s, x, s, f64::INFINITY, &[], scale, &QuadOptions::default(), |_, off, e| {
        [e[0], e[1], e[0] / off, e[1] / off]
    })?;
    let den = [v.value[0], v.value[1]];
    if !(den[0] + den[1] > 0.0) {
        return Err(Error::Numeric {
            message: format!("filter normalizer vanished at time {s}, value {x}"),
            diagnostics: format!("scale {scale}, integrals {:?}", v.value),
        });
    }
    Ok(DriftSums { den, num: [v.value[2], v.value[3]], diverges: false })
}

/// Drift of the information process at `(s, x)`: the conditional mean of
/// `(Z - x)/(τ - s)` given no absorption, or zero after absorption.
pub fn info_drift(model: &InfoModel, s: f64, x: f64, absorbed: bool) -> Result<f64> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::Domain(format!("drift time must be finite and non-negative, got {s}")));
    }
    if absorbed {
        absorbed_pin(model, x)?;
        return Ok(0.0);
    }
    if s == 0.0 && x != 0.0 {
        return Err(Error::Input(format!("the process starts at 0, got {x} at time 0")));
    }
    let b = drift_sums(model, s, x)?.drift(model, x);
    if b.is_infinite() {
        return Err(Error::Domain(format!("drift diverges at time {s}: the length has mass near zero")));
    }
    Ok(b)
}
