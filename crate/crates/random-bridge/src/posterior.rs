use crate::functional::Payoff;
use crate::model::RandomBridgeModel;
use deterministic_bridge::transition_moments;
use distributions::quadrature::{composite_legendre, QuadOptions};
use distributions::{ContinuousPin, PinLaw};
use gaussian_core::{ln_kernel, Error, Result};

/// One support point of the posterior of `(τ, Z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorNode {
    pub length: f64,
    pub pin: f64,
    pub weight: f64,
    /// The length is at most the observation time, so the path has already
    /// reached its pin.
    pub settled: bool,
}

/// Discretized posterior of `(τ, Z)` given one observation `ζ_t = x`.
///
/// Nodes with `length ≤ time` carry the absorbed mass; their pin equals the
/// observed value. Weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorTable {
    time: f64,
    observed: f64,
    absorbed: bool,
    nodes: Vec<PosteriorNode>,
    ln_normalizer: f64,
}

impl PosteriorTable {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn observed(&self) -> f64 {
        self.observed
    }

    /// Whether the observation coincides with a pin atom, which for a
    /// discrete pin means the path has already been absorbed.
    pub fn absorbed(&self) -> bool {
        self.absorbed
    }

    pub fn nodes(&self) -> &[PosteriorNode] {
        &self.nodes
    }

    /// Log of the unnormalized total mass: the density of `ζ_t` at the
    /// observation with respect to Lebesgue measure plus the pin atoms.
    pub fn ln_normalizer(&self) -> f64 {
        self.ln_normalizer
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Posterior mean of `g(τ, Z)`.
    pub fn expect(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * g(n.length, n.pin)).sum()
    }

    /// `P(τ ≤ s | ζ_t = x)`.
    pub fn prob_length_at_most(&self, s: f64) -> f64 {
        self.nodes.iter().filter(|n| n.length <= s && (n.settled || s > self.time)).map(|n| n.weight).sum()
    }

    /// `E[g(τ, Z, ζ_u) | ζ_t = x]` for `u > t`: lengths up to `u` contribute
    /// `g(r, z, z)`, longer ones the Gaussian transition expectation.
    pub fn predict(&self, u: f64, payoff: &dyn Payoff) -> Result<f64> {
        if !(u > self.time) {
            return Err(Error::Domain(format!("prediction time {u} must exceed observation time {}", self.time)));
        }
        Ok(self
            .nodes
            .iter()
            .map(|n| {
                let v = if n.settled || n.length <= u {
                    payoff.value(n.length, n.pin, n.pin)
                } else {
                    let (var, mean) = transition_moments(n.length, n.pin, self.time, self.observed, u);
                    payoff.gauss_expect(n.length, n.pin, mean, var)
                };
                n.weight * v
            })
            .sum())
    }
}

/// Optional reweighting of the absorbed part, used by the two-time
/// conditional: lengths must exceed `from`, and each absorbed node is
/// multiplied by `exp(ln_factor(r))`.
pub(crate) struct AbsorbedWeighting<'a> {
    pub from: f64,
    pub min_offset: f64,
    pub ln_factor: &'a dyn Fn(f64) -> f64,
}

const TABLE_OPTS: QuadOptions = QuadOptions { epsabs: 0.0, epsrel: 1e-10, max_intervals: 2000 };

/// Half-width, in standard deviations, of the pin window per length node.
const PIN_WINDOW: f64 = 10.0;

fn ln_bridge_marginal(t: f64, r: f64, offset: f64, z: f64, x: f64) -> f64 {
    ln_kernel(t * offset / r, x - t * z / r)
}

/// Gauss–Legendre nodes over the part of the pin support where the bridge
/// marginal `φ(x)` (a Gaussian in `z` centred at `xr/t`) is not negligible.
fn pin_rule(pin: &ContinuousPin, t: f64, r: f64, offset: f64, x: f64, pin_breaks: &[f64]) -> Vec<(f64, f64)> {
    let centre = x * r / t;
    let sigma = (r * offset / t).sqrt();
    let (slo, shi) = pin.support();
    let lo = slo.max(centre - PIN_WINDOW * sigma);
    let hi = shi.min(centre + PIN_WINDOW * sigma);
    if !(hi > lo) {
        return Vec::new();
    }
    let width = 1.5 * sigma.min(pin.scale());
    let mut cuts = vec![lo];
    cuts.extend(pin.kinks().into_iter().chain(pin_breaks.iter().copied()).filter(|k| *k > lo && *k < hi));
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let panels = ((w[1] - w[0]) / width).ceil().clamp(1.0, 64.0) as usize;
        out.extend(composite_legendre(w[0], w[1], panels, 8));
    }
    out
}

/// Unnormalized entry: length, pin, log-weight, settled flag.
type RawNode = (f64, f64, f64, bool);

fn finish(time: f64, observed: f64, absorbed: bool, raw: Vec<RawNode>) -> Result<PosteriorTable> {
    let m = raw.iter().map(|e| e.2).fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return Err(Error::Inference(format!(
            "observation {observed} at time {time} has zero likelihood under the model"
        )));
    }
    let s: f64 = raw.iter().map(|e| (e.2 - m).exp()).sum();
    let ln_normalizer = m + s.ln();
    let nodes = raw
        .into_iter()
        .map(|(length, pin, lw, settled)| PosteriorNode { length, pin, weight: (lw - ln_normalizer).exp(), settled })
        .filter(|n| n.weight > 0.0)
        .collect();
    Ok(PosteriorTable { time, observed, absorbed, nodes, ln_normalizer })
}

pub(crate) fn build_table(
    model: &RandomBridgeModel,
    t: f64,
    x: f64,
    breaks: &[f64],
    pin_breaks: &[f64],
    weighting: Option<&AbsorbedWeighting<'_>>,
) -> Result<PosteriorTable> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("observation time must be positive, got {t}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("observation must be finite, got {x}")));
    }
    let law = model.length();
    let mut raw: Vec<RawNode> = Vec::new();
    match model.pin() {
        PinLaw::Discrete { points, probs } => {
            if let Some(i) = model.pin().atom_index(x) {
                let nodes = law.nodes(0.0, t, 0.0, breaks, |_, _| 1.0, &TABLE_OPTS)?;
                raw.extend(nodes.iter().map(|n| (n.length, x, n.weight.ln() + probs[i].ln(), true)));
                if raw.is_empty() {
                    return Err(Error::Inference(format!(
                        "observed the pin value {x} at time {t} but the length law has no mass on (0, {t}]"
                    )));
                }
                return finish(t, x, true, raw);
            }
            let active: Vec<(f64, f64)> =
                points.iter().zip(probs).filter(|(_, p)| **p > 0.0).map(|(z, p)| (*z, p.ln())).collect();
            let min_offset = active.iter().map(|(z, _)| (x - z).powi(2) / 100.0).fold(f64::INFINITY, f64::min);
            let guide = |r: f64, off: f64| -> f64 {
                active.iter().map(|(z, lp)| (lp + ln_bridge_marginal(t, r, off, *z, x)).exp()).sum()
            };
            let nodes = law.nodes(t, f64::INFINITY, min_offset, breaks, guide, &TABLE_OPTS)?;
            for n in &nodes {
                for (z, lp) in &active {
                    raw.push((
                        n.length,
                        *z,
                        n.weight.ln() + lp + ln_bridge_marginal(t, n.length, n.offset, *z, x),
                        false,
                    ));
                }
            }
            finish(t, x, false, raw)
        }
        PinLaw::Continuous(pin) => {
            let ln_fx = pin.ln_pdf(x);
            if ln_fx.is_finite() {
                let (from, min_offset) = weighting.map_or((0.0, 0.0), |w| (w.from, w.min_offset));
                let factor = |r: f64| weighting.map_or(0.0, |w| (w.ln_factor)(r));
                if from < t {
                    let nodes = law.nodes(from, t, min_offset, breaks, |r, _| factor(r).exp(), &TABLE_OPTS)?;
                    raw.extend(nodes.iter().map(|n| (n.length, x, n.weight.ln() + ln_fx + factor(n.length), true)));
                }
            }
            let inner = |r: f64, off: f64| -> f64 {
                pin_rule(pin, t, r, off, x, pin_breaks)
                    .iter()
                    .map(|&(z, w)| w * (ln_bridge_marginal(t, r, off, z, x) + pin.ln_pdf(z)).exp())
                    .sum()
            };
            let nodes = law.nodes(t, f64::INFINITY, 0.0, breaks, inner, &TABLE_OPTS)?;
            for n in &nodes {
                for (z, w) in pin_rule(pin, t, n.length, n.offset, x, pin_breaks) {
                    let lw = n.weight.ln() + w.ln() + ln_bridge_marginal(t, n.length, n.offset, z, x) + pin.ln_pdf(z);
                    if lw.is_finite() {
                        raw.push((n.length, z, lw, false));
                    }
                }
            }
            finish(t, x, false, raw)
        }
    }
}

/// Posterior of `(τ, Z)` given `ζ_t = x`.
///
/// For a discrete pin an observation equal to one of the pin points (bit for
/// bit) is treated as absorption; a value merely close to a pin point is not.
pub fn posterior_tau_z(model: &RandomBridgeModel, t: f64, x: f64) -> Result<PosteriorTable> {
    build_table(model, t, x, &[], &[], None)
}

impl PosteriorTable {
    /// Posterior with extra breakpoints: `length_breaks` where a later
    /// integrand in `r` is not smooth, `pin_breaks` where it jumps in `z`.
    /// Expectations of functions with jumps elsewhere converge slowly.
    pub fn build(model: &RandomBridgeModel, t: f64, x: f64, length_breaks: &[f64], pin_breaks: &[f64]) -> Result<Self> {
        build_table(model, t, x, length_breaks, pin_breaks, None)
    }
}

/// `E[g(τ, Z, ζ_u) | ζ_t = x]` for `0 < t < u`.
pub fn predict_future(model: &RandomBridgeModel, t: f64, x: f64, u: f64, payoff: &dyn Payoff) -> Result<f64> {
    if !(t > 0.0 && u > t) {
        return Err(Error::Domain(format!("need 0 < t < u, got t={t}, u={u}")));
    }
    build_table(model, t, x, &[u], &payoff.kinks(), None)?.predict(u, payoff)
}
