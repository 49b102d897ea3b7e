use crate::functional::Payoff;
use crate::model::RandomBridgeModel;
use crate::posterior::{build_table, predict_future, AbsorbedWeighting};
use distributions::{LengthLaw, PinLaw};
use gaussian_core::{ln_kernel, Error, Result};

/// `E[g(τ, Z, ζ_u) | ζ_t1 = x1, ζ_t2 = x2]` for an absolutely continuous pin
/// and a length law with no mass on `(0, t1]`.
///
/// Given `(τ, Z) = (r, z)` with `r > t2`, the joint density of the two
/// observations factors as `p(t1,x1) p(t2-t1,x2-x1)/p(t2,x2)` times the
/// one-time marginal at `t2`, and that factor does not depend on `(r, z)`.
/// So only lengths in `(t1, t2]`, where `ζ_t2 = Z = x2`, are reweighted, each
/// by the bridge marginal density of `ζ_t1` for a bridge of length `r`
/// pinned at `x2`.
pub fn two_time_conditional(
    model: &RandomBridgeModel,
    t1: f64,
    t2: f64,
    u: f64,
    x1: f64,
    x2: f64,
    payoff: &dyn Payoff,
) -> Result<f64> {
    if !matches!(model.pin(), PinLaw::Continuous(_)) {
        return Err(Error::Precondition("the two-time formula requires an absolutely continuous pin".into()));
    }
    if !(t1 > 0.0 && t1 < t2 && t2 < u) {
        return Err(Error::Precondition(format!("need 0 < t1 < t2 < u, got {t1}, {t2}, {u}")));
    }
    if !model.length().no_mass_up_to(t1) {
        return Err(Error::Precondition(format!(
            "the length law puts mass on (0, {t1}]; the two-time formula needs P(τ ≤ t1) = 0"
        )));
    }
    let shared = ln_kernel(t1, x1) + ln_kernel(t2 - t1, x2 - x1) - ln_kernel(t2, x2);
    let ln_factor = |r: f64| {
        if r <= t1 {
            f64::NEG_INFINITY
        } else {
            ln_kernel(t1 * (r - t1) / r, x1 - t1 * x2 / r) - shared
        }
    };
    let weighting = AbsorbedWeighting { from: t1, min_offset: (x1 - x2).powi(2) / 100.0, ln_factor: &ln_factor };
    build_table(model, t2, x2, &[u], &payoff.kinks(), Some(&weighting))?.predict(u, payoff)
}

/// Two-time versus one-time conditional expectations of a future payoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapResult {
    /// Conditioning on both observations.
    pub lhs: f64,
    /// Conditioning on the later observation only.
    pub rhs: f64,
    /// `|lhs - rhs|`.
    pub gap: f64,
}

/// Compares the two-observation conditional with the one-observation
/// predictive at `(t2, x2)`. A nonzero gap means the history matters.
pub fn markov_gap(
    model: &RandomBridgeModel,
    t1: f64,
    t2: f64,
    u: f64,
    x1: f64,
    x2: f64,
    payoff: &dyn Payoff,
) -> Result<GapResult> {
    let lhs = two_time_conditional(model, t1, t2, u, x1, x2, payoff)?;
    let rhs = predict_future(model, t2, x2, u, payoff)?;
    Ok(GapResult { lhs, rhs, gap: (lhs - rhs).abs() })
}

/// The gap for a length equal to `T1` or `T2` with probability ½ each,
/// observed at `t1 < T1 < t2 < T2 < u`.
#[allow(clippy::too_many_arguments)]
pub fn non_markov_gap(
    pin: &PinLaw,
    lengths: (f64, f64),
    t1: f64,
    t2: f64,
    u: f64,
    x1: f64,
    x2: f64,
    payoff: &dyn Payoff,
) -> Result<GapResult> {
    let (l1, l2) = lengths;
    if !(0.0 < t1 && t1 < l1 && l1 < t2 && t2 < l2 && l2 < u) {
        return Err(Error::Precondition(format!(
            "need 0 < t1 < T1 < t2 < T2 < u, got t1={t1}, T1={l1}, t2={t2}, T2={l2}, u={u}"
        )));
    }
    let model = RandomBridgeModel::new(LengthLaw::two_point(l1, l2, 0.5)?, pin.clone());
    markov_gap(&model, t1, t2, u, x1, x2, payoff)
}
