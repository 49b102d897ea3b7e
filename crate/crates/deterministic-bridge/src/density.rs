use crate::BridgeSpec;
use gaussian_core::{ln_kernel, Error, Result};

fn interior(spec: &BridgeSpec, t: f64) -> Result<()> {
    if t > 0.0 && t < spec.length() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time {t} outside (0, {}) where the marginal is non-degenerate", spec.length())))
    }
}

/// Log of the marginal density of the bridge at time `t`.
pub fn bridge_marginal_logpdf(spec: &BridgeSpec, t: f64, x: f64) -> Result<f64> {
    interior(spec, t)?;
    let r = spec.length();
    Ok(ln_kernel(t * (r - t) / r, x - t * spec.pin() / r))
}

/// Marginal density: normal with variance `t(r-t)/r` and mean `tz/r`.
pub fn bridge_marginal_pdf(spec: &BridgeSpec, t: f64, x: f64) -> Result<f64> {
    bridge_marginal_logpdf(spec, t, x).map(f64::exp)
}

/// Log of the joint density of the bridge at `times` (all below the length).
pub fn bridge_fdd_logpdf(spec: &BridgeSpec, times: &[f64], xs: &[f64]) -> Result<f64> {
    if times.len() != xs.len() || times.is_empty() {
        return Err(Error::Domain("times and values must be non-empty and of equal length".into()));
    }
    let r = spec.length();
    let z = spec.pin();
    let (mut pt, mut px, mut acc) = (0.0, 0.0, 0.0);
    for (&t, &x) in times.iter().zip(xs) {
        if !(t > pt) {
            return Err(Error::Domain(format!("times must be increasing and positive, got {t} after {pt}")));
        }
        acc += ln_kernel(t - pt, x - px);
        pt = t;
        px = x;
    }
    if pt >= r {
        return Err(Error::Domain(format!("last time {pt} not below the length {r}")));
    }
    Ok(acc + ln_kernel(r - pt, z - px) - ln_kernel(r, z))
}

pub fn bridge_fdd_pdf(spec: &BridgeSpec, times: &[f64], xs: &[f64]) -> Result<f64> {
    bridge_fdd_logpdf(spec, times, xs).map(f64::exp)
}

fn ordered(spec: &BridgeSpec, t: f64, u: f64) -> Result<()> {
    if t > 0.0 && t < u && u < spec.length() {
        Ok(())
    } else {
        Err(Error::Domain(format!("need 0 < t < u < r, got t={t}, u={u}, r={}", spec.length())))
    }
}

/// Log transition density from `(t, x)` to `(u, y)`, product form.
pub fn bridge_transition_logpdf(spec: &BridgeSpec, t: f64, x: f64, u: f64, y: f64) -> Result<f64> {
    ordered(spec, t, u)?;
    let r = spec.length();
    let z = spec.pin();
    Ok(ln_kernel(r - u, z - y) + ln_kernel(u - t, y - x) - ln_kernel(r - t, z - x))
}

pub fn bridge_transition_pdf(spec: &BridgeSpec, t: f64, x: f64, u: f64, y: f64) -> Result<f64> {
    bridge_transition_logpdf(spec, t, x, u, y).map(f64::exp)
}

/// Variance and mean of the Gaussian transition law from `(t, x)` to time `u`
/// for a bridge of length `r` pinned at `z`; requires `t < u < r`.
#[inline]
pub fn transition_moments(r: f64, z: f64, t: f64, x: f64, u: f64) -> (f64, f64) {
    let span = r - t;
    let var = (r - u) * (u - t) / span;
    let mean = ((r - u) * x + (u - t) * z) / span;
    (var, mean)
}

/// Transition density written as a single Gaussian in `y`.
pub fn bridge_transition_alt_pdf(spec: &BridgeSpec, t: f64, x: f64, u: f64, y: f64) -> Result<f64> {
    ordered(spec, t, u)?;
    let (var, mean) = transition_moments(spec.length(), spec.pin(), t, x, u);
    Ok(ln_kernel(var, y - mean).exp())
}

/// Drift of the bridge SDE at `(s, x)`; zero once the length is reached.
pub fn bridge_drift(spec: &BridgeSpec, s: f64, x: f64) -> f64 {
    if s < spec.length() {
        (spec.pin() - x) / (spec.length() - s)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(r: f64, z: f64) -> BridgeSpec {
        BridgeSpec::new(r, z).unwrap()
    }

    #[test]
    fn marginal_peak_values() {
        let a = bridge_marginal_pdf(&spec(1.0, 0.0), 0.5, 0.0).unwrap();
        let b = bridge_marginal_pdf(&spec(1.0, 1.0), 0.5, 0.5).unwrap();
        assert!((a - 0.797_884_560_8).abs() < 1e-10);
        assert!((b - 0.797_884_560_8).abs() < 1e-10);
    }

    #[test]
    fn marginal_rejects_degenerate_times() {
        let s = spec(1.0, 0.0);
        assert!(bridge_marginal_pdf(&s, 0.0, 0.0).is_err());
        assert!(bridge_marginal_pdf(&s, 1.0, 0.0).is_err());
    }

    #[test]
    fn fdd_single_time_is_marginal() {
        let s = spec(2.0, -1.0);
        let a = bridge_fdd_pdf(&s, &[0.7], &[0.3]).unwrap();
        let b = bridge_marginal_pdf(&s, 0.7, 0.3).unwrap();
        assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn fdd_two_times_is_chain() {
        let s = spec(1.0, 0.0);
        let a = bridge_fdd_pdf(&s, &[0.3, 0.6], &[0.1, -0.2]).unwrap();
        let b = bridge_marginal_pdf(&s, 0.3, 0.1).unwrap() * bridge_transition_pdf(&s, 0.3, 0.1, 0.6, -0.2).unwrap();
        assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn fdd_rejects_bad_times() {
        let s = spec(1.0, 0.0);
        assert!(bridge_fdd_pdf(&s, &[0.6, 0.3], &[0.0, 0.0]).is_err());
        assert!(bridge_fdd_pdf(&s, &[0.3, 1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn transition_forms_agree_at_reference_point() {
        let s = spec(1.0, 0.0);
        let a = bridge_transition_pdf(&s, 0.25, 0.1, 0.5, 0.2).unwrap();
        let b = bridge_transition_alt_pdf(&s, 0.25, 0.1, 0.5, 0.2).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn drift_values() {
        assert_eq!(bridge_drift(&spec(2.0, 1.0), 1.0, 0.0), 1.0);
        assert_eq!(bridge_drift(&spec(2.0, 1.0), 3.0, 7.0), 0.0);
    }
}
