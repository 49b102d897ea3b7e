use crate::filter::absorbed_pin;
use crate::model::InfoModel;
use crate::phi::{log_scale, phi_integrals};
use distributions::quadrature::{integrate, QuadOptions};
use gaussian_core::{ln_kernel, Error, Result};

/// Law of `ξ_u` given `ξ_t = x`: point masses at the two pins plus a part
/// with a density in `y`.
#[derive(Debug, Clone)]
pub struct MixedDensity {
    model: InfoModel,
    t: f64,
    x: f64,
    u: f64,
    atoms: [f64; 2],
    /// Log of the filter normalizer at `(t, x)`; `None` once absorbed.
    ln_norm: Option<f64>,
}

/// Transition law of the information process from `(t, x)` to time `u > t`.
pub fn info_transition(model: &InfoModel, t: f64, x: f64, absorbed: bool, u: f64) -> Result<MixedDensity> {
    if !(t >= 0.0 && u > t && u.is_finite()) {
        return Err(Error::Domain(format!("transition needs 0 ≤ t < u, got t = {t}, u = {u}")));
    }
    if t == 0.0 && (x != 0.0 || absorbed) {
        return Err(Error::Input(format!("the process starts at 0, got {x} at time 0")));
    }
    let mut out = MixedDensity { model: model.clone(), t, x, u, atoms: [0.0; 2], ln_norm: None };
    if absorbed {
        out.atoms[absorbed_pin(model, x)?] = 1.0;
        return Ok(out);
    }
    let [p1, p2] = model.probs();
    let scale = log_scale(model, t, x);
    let v = phi_integrals(model, t, x, t, f64::INFINITY, &[u], scale, &QuadOptions::default(), |r, _, e| {
        let near = if r <= u { 1.0 } else { 0.0 };
        [p1 * e[0] * near, p2 * e[1] * near, p1 * e[0] + p2 * e[1]]
    })?;
    let den = v.value[2];
    if !(den > 0.0) {
        return Err(Error::Inference(format!("observation {x} at time {t} has zero likelihood")));
    }
    out.atoms = [v.value[0] / den, v.value[1] / den];
    out.ln_norm = Some(den.ln() + scale);
    Ok(out)
}

impl MixedDensity {
    /// Masses at `z1` and `z2`.
    pub fn atoms(&self) -> [f64; 2] {
        self.atoms
    }

    pub fn times(&self) -> (f64, f64) {
        (self.t, self.u)
    }

    /// Density of the non-absorbed part at `y`.
    pub fn lebesgue(&self, y: f64) -> Result<f64> {
        let Some(ln_norm) = self.ln_norm else {
            return Ok(0.0);
        };
        let m = &self.model;
        let [p1, p2] = m.probs();
        let scale = log_scale(m, self.u, y);
        let v = phi_integrals(m, self.u, y, self.u, f64::INFINITY, &[], scale, &QuadOptions::default(), |_, _, e| {
            [p1 * e[0] + p2 * e[1]]
        })?;
        if v.value[0] <= 0.0 {
            return Ok(0.0);
        }
        Ok((ln_kernel(self.u - self.t, y - self.x) + v.value[0].ln() + scale - ln_norm).exp())
    }

    /// Interval carrying all but a negligible part of the density.
    pub fn support(&self) -> (f64, f64) {
        let [z1, z2] = self.model.pins();
        let w = 10.0 * (self.u - self.t).sqrt();
        (self.x.min(z1).min(z2) - w, self.x.max(z1).max(z2) + w)
    }

    /// `∫ g(y) · density(y) dy` over the non-absorbed part.
    pub fn lebesgue_expect<G: FnMut(f64) -> f64>(&self, mut g: G, kinks: &[f64]) -> Result<f64> {
        if self.ln_norm.is_none() {
            return Ok(0.0);
        }
        let (lo, hi) = self.support();
        let [z1, z2] = self.model.pins();
        let mut breaks = vec![lo, hi, self.x, z1, z2];
        breaks.extend(kinks.iter().copied().filter(|k| *k > lo && *k < hi));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut err = None;
        let opts = QuadOptions { epsabs: 1e-13, ..QuadOptions::with_epsrel(1e-9) };
        let v = integrate(
            |y| match self.lebesgue(y) {
                Ok(d) => g(y) * d,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            &breaks,
            &opts,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(v.value),
        }
    }

    /// Mass of the non-absorbed part.
    pub fn lebesgue_mass(&self) -> Result<f64> {
        self.lebesgue_expect(|_| 1.0, &[])
    }

    /// Total mass; one up to quadrature error.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.atoms[0] + self.atoms[1] + self.lebesgue_mass()?)
    }

    /// `E[g(ξ_u) | ξ_t = x]`.
    pub fn expect<G: FnMut(f64) -> f64>(&self, mut g: G, kinks: &[f64]) -> Result<f64> {
        let [z1, z2] = self.model.pins();
        Ok(self.atoms[0] * g(z1) + self.atoms[1] * g(z2) + self.lebesgue_expect(&mut g, kinks)?)
    }
}
