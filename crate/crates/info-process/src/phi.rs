use crate::model::InfoModel;
use distributions::quadrature::{QuadOptions, VecIntegral};
use gaussian_core::Result;

/// `ln φ` in terms of the offset `r - s > 0`.
#[inline]
pub(crate) fn ln_phi(z: f64, r: f64, offset: f64, x: f64) -> f64 {
    let d = z - x;
    0.5 * (r / offset).ln() - 0.5 * (d * d / offset - z * z / r)
}

/// Log of the weight for pin `i`; `-inf` when `r ≤ s`.
pub fn ln_phi_weight(model: &InfoModel, i: usize, s: f64, r: f64, x: f64) -> f64 {
    if r <= s {
        return f64::NEG_INFINITY;
    }
    ln_phi(model.pins()[i], r, r - s, x)
}

/// The weight for pin `i`; zero for `r ≤ s` and where it underflows, which
/// is its continuous extension as `r ↓ s` when `x` differs from the pin.
pub fn phi_weight(model: &InfoModel, i: usize, s: f64, r: f64, x: f64) -> f64 {
    let l = ln_phi_weight(model, i, s, r, x);
    if l < -745.0 {
        0.0
    } else {
        l.exp()
    }
}

/// Upper bound on the exponent of `φ_s^i(·, x)` over both pins. Dividing by
/// `exp(scale)` keeps scaled weights at most of order one.
pub(crate) fn log_scale(model: &InfoModel, s: f64, x: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    model
        .pins()
        .iter()
        .map(|z| {
            let gap = (z.abs() - (z - x).abs()).max(0.0);
            gap * gap / (2.0 * s)
        })
        .fold(0.0, f64::max)
}

/// Offset below which every scaled weight is below `e^-80`.
pub(crate) fn negligible_offset(model: &InfoModel, s: f64, x: f64, scale: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    model
        .pins()
        .iter()
        .map(|z| {
            let d2 = (z - x).powi(2);
            let lift = z * z / (2.0 * s) - scale;
            d2 / (2.0 * (lift.max(0.0) + 80.0))
        })
        .fold(f64::INFINITY, f64::min)
}

/// `∫_(a,b] f(r, r-s, [e1, e2]) P_τ(dr)` with `e_i = φ_s^i(r,x) / exp(scale)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn phi_integrals<const N: usize, F>(
    model: &InfoModel,
    s: f64,
    x: f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    scale: f64,
    opts: &QuadOptions,
    mut f: F,
) -> Result<VecIntegral<N>>
where
    F: FnMut(f64, f64, [f64; 2]) -> [f64; N],
{
    let [z1, z2] = model.pins();
    let min_offset = if a <= s { negligible_offset(model, s, x, scale) } else { 0.0 };
    model.length().integrate_range(
        a,
        b,
        (min_offset - (a - s)).max(0.0),
        breaks,
        |r, off_a| {
            let off = if a == s { off_a } else { r - s };
            let e = [(ln_phi(z1, r, off, x) - scale).exp(), (ln_phi(z2, r, off, x) - scale).exp()];
            f(r, off, e)
        },
        opts,
    )
}
