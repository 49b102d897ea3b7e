use crate::model::InfoModel;
use crate::phi::{ln_phi, log_scale, negligible_offset, phi_integrals};
use deterministic_bridge::{PathSample, TimeGrid};
use distributions::quadrature::{gauss_legendre, QuadOptions};
use gaussian_core::{standard_normal, Error, PathRng, Result};
use rand::Rng;
use std::sync::OnceLock;

/// Largest grid step accepted by the Euler scheme.
pub const MAX_STEP: f64 = 1e-2;

/// Offsets `(z - x)² / (2h)` above this make absorption within one step
/// negligible, and the near-range integrals are skipped.
const NEAR_CUTOFF: f64 = 45.0;

/// Log scale above which the weights are too peaked for the fixed rule.
const SHARP_SCALE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerOptions {
    /// Magnitude cap on the drift used in a step.
    pub drift_cap: f64,
    /// Multiplier on the drift; 1 for the correct process.
    pub drift_scale: f64,
    /// Panel width of the fixed ten-point Gauss–Legendre rule over the
    /// length, in the variable `½ ln(r - s)`.
    pub panel_width: f64,
}

fn unit_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let (xs, ws) = gauss_legendre(10);
        xs.into_iter().zip(ws).collect()
    })
}

impl Default for EulerOptions {
    fn default() -> Self {
        Self { drift_cap: 1e8, drift_scale: 1.0, panel_width: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerInfoRun {
    /// Simulated path; the realized length is the grid time of absorption.
    pub path: PathSample,
    /// Drift `b(s_k, X_k)` at each grid time: `NaN` where it diverges (time
    /// zero with length mass near zero) and zero after absorption.
    pub drift: Vec<f64>,
    pub capped_steps: usize,
}

/// Integrals of one step from `(s, x)` with step `h`, split at `s + h`:
/// `[D_near; 2], [D_far; 2], [N_near; 2], [N_far; 2]`, all scaled alike.
struct StepSums {
    near: [f64; 2],
    far: [f64; 2],
    near_num: [f64; 2],
    far_num: [f64; 2],
}

fn step_sums(model: &InfoModel, s: f64, x: f64, h: f64, full: bool, opts: &EulerOptions) -> Result<StepSums> {
    let scale = log_scale(model, s, x);
    let edge = s + h;
    let skip_near = !full && model.pins().iter().all(|z| (z - x).powi(2) / (2.0 * h) > NEAR_CUTOFF);
    if scale > SHARP_SCALE {
        return adaptive_step_sums(model, s, x, edge, scale, skip_near);
    }
    let negligible = negligible_offset(model, s, x, scale);
    // Beyond the edge the weights are smooth in r, so a relative floor on the
    // offset from the edge loses nothing.
    let (start, min_offset) = if skip_near { (edge, (negligible - h).max(1e-9 * h)) } else { (s, negligible) };
    let [z1, z2] = model.pins();
    let mut c = [0.0; 8];
    for node in model.length().log_rule(start, f64::INFINITY, min_offset, &[edge], opts.panel_width, unit_rule()) {
        let r = node.length;
        let off = if skip_near { r - s } else { node.offset };
        let e = [(ln_phi(z1, r, off, x) - scale).exp(), (ln_phi(z2, r, off, x) - scale).exp()];
        let w = node.weight;
        if r <= edge {
            let inv = if s > 0.0 { 1.0 / off } else { 0.0 };
            c[0] += w * e[0];
            c[1] += w * e[1];
            c[4] += w * e[0] * inv;
            c[5] += w * e[1] * inv;
        } else {
            c[2] += w * e[0];
            c[3] += w * e[1];
            c[6] += w * e[0] / off;
            c[7] += w * e[1] / off;
        }
    }
    Ok(StepSums::from(c))
}

/// Weights peaked too sharply for the fixed rule; happens far out in the
/// state space, where the process rarely goes.
fn adaptive_step_sums(model: &InfoModel, s: f64, x: f64, edge: f64, scale: f64, skip_near: bool) -> Result<StepSums> {
    let start = if skip_near { edge } else { s };
    let v = phi_integrals(
        model,
        s,
        x,
        start,
        f64::INFINITY,
        &[edge],
        scale,
        &QuadOptions::with_epsrel(1e-9),
        |r, off, e| {
            if r <= edge {
                let inv = if s > 0.0 { 1.0 / off } else { 0.0 };
                [e[0], e[1], 0.0, 0.0, e[0] * inv, e[1] * inv, 0.0, 0.0]
            } else {
                [0.0, 0.0, e[0], e[1], 0.0, 0.0, e[0] / off, e[1] / off]
            }
        },
    )?;
    Ok(StepSums::from(v.value))
}

impl From<[f64; 8]> for StepSums {
    fn from(c: [f64; 8]) -> Self {
        Self { near: [c[0], c[1]], far: [c[2], c[3]], near_num: [c[4], c[5]], far_num: [c[6], c[7]] }
    }
}

/// Law of one step of the process from a non-absorbed `(s, x)` over `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLaw {
    /// Probability of absorption within `(s, s + h]`.
    pub absorb_prob: f64,
    /// Probability of the first pin given absorption within the step.
    pub first_pin_given_absorb: f64,
    /// Drift given no absorption within the step.
    pub continuation_drift: f64,
    /// Drift at `(s, x)`; `NaN` where it diverges.
    pub drift: f64,
    /// `E[ξ_{s+h} - x | ξ_s = x]`, the one-step compensator.
    pub mean_increment: f64,
}

/// One-step law from the fixed rule. Exact up to quadrature error: the
/// bridge given `(τ, Z) = (r, z)` ends the step at `z` when `r ≤ s + h` and
/// has moved by `(z - x) h / (r - s)` on average otherwise.
pub fn step_law(model: &InfoModel, s: f64, x: f64, h: f64, opts: &EulerOptions) -> Result<StepLaw> {
    let pins = model.pins();
    let probs = model.probs();
    let mut sums = step_sums(model, s, x, h, false, opts)?;
    if sums.far[0] + sums.far[1] <= 0.0 && sums.near == [0.0; 2] {
        sums = step_sums(model, s, x, h, true, opts)?;
    }
    let near_i = [probs[0] * sums.near[0], probs[1] * sums.near[1]];
    let near = near_i[0] + near_i[1];
    let far = probs[0] * sums.far[0] + probs[1] * sums.far[1];
    let total = near + far;
    if !(total > 0.0) {
        return Err(Error::Numeric {
            message: format!("filter normalizer vanished at time {s}, value {x}"),
            diagnostics: format!("near {near}, far {far}"),
        });
    }
    let far_top: f64 = (0..2).map(|i| probs[i] * (pins[i] - x) * sums.far_num[i]).sum();
    let near_top: f64 = (0..2).map(|i| probs[i] * (pins[i] - x) * sums.near_num[i]).sum();
    let near_jump: f64 = (0..2).map(|i| near_i[i] * (pins[i] - x)).sum();
    let diverges = s == 0.0 && model.length().lower_bound() == 0.0;
    Ok(StepLaw {
        absorb_prob: near / total,
        first_pin_given_absorb: if near > 0.0 { near_i[0] / near } else { 0.0 },
        continuation_drift: if far > 0.0 { far_top / far } else { 0.0 },
        drift: if diverges { f64::NAN } else { (near_top + far_top) / total },
        mean_increment: (near_jump + far_top * h) / total,
    })
}

/// Simulates the information process on `grid`. Each step first decides
/// absorption within `(s, s+h]` with its filtered probability, choosing the
/// pin in proportion to the near-range weights; otherwise it takes an
/// Euler step with the drift conditioned on no absorption in the step. The
/// one-step mean then matches the exact process.
pub fn euler_simulate_info(
    model: &InfoModel,
    grid: &TimeGrid,
    rng: &mut PathRng,
    opts: &EulerOptions,
) -> Result<EulerInfoRun> {
    let times = grid.times();
    if times.len() < 2 {
        return Err(Error::Input("Euler integration needs at least one step".into()));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] - w[0] > MAX_STEP * (1.0 + 1e-9)) {
        return Err(Error::Input(format!("grid step {} exceeds {MAX_STEP}", w[1] - w[0])));
    }
    let pins = model.pins();
    let n = times.len();
    let mut values = Vec::with_capacity(n);
    let mut drift = Vec::with_capacity(n);
    values.push(0.0);
    let mut x = 0.0;
    let mut absorbed: Option<(usize, usize)> = None;
    let mut capped_steps = 0;
    for k in 1..n {
        let (s, h) = (times[k - 1], times[k] - times[k - 1]);
        if absorbed.is_some() {
            drift.push(0.0);
            values.push(x);
            continue;
        }
        let law = step_law(model, s, x, h, opts)?;
        drift.push(law.drift);
        let u: f64 = rng.length.random();
        if u < law.absorb_prob {
            let v: f64 = rng.pin.random();
            let i = usize::from(v >= law.first_pin_given_absorb);
            x = pins[i];
            absorbed = Some((k, i));
        } else {
            let mut b = opts.drift_scale * law.continuation_drift;
            if b.abs() > opts.drift_cap {
                b = opts.drift_cap.copysign(b);
                capped_steps += 1;
            }
            x += b * h + h.sqrt() * standard_normal(&mut rng.noise);
        }
        values.push(x);
    }
    drift.push(if absorbed.is_some() {
        0.0
    } else {
        crate::drift::drift_sums(model, times[n - 1], x)?.drift(model, x)
    });
    let (realized_length, realized_pin, absorb_index) = match absorbed {
        Some((k, i)) => (times[k], pins[i], Some(k)),
        None => (f64::INFINITY, f64::NAN, None),
    };
    Ok(EulerInfoRun {
        path: PathSample { times: times.to_vec(), values, realized_length, realized_pin, absorb_index },
        drift,
        capped_steps,
    })
}
