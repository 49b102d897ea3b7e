use crate::{BridgeSpec, PathSample, TimeGrid};
use gaussian_core::{standard_normal, Error, Result, SourceRng};

/// Magnitude cap applied to the drift in Euler integration.
pub const DRIFT_CAP: f64 = 1e8;
/// Distance to the length below which the Euler state is snapped to the pin.
pub const SNAP_WINDOW: f64 = 1e-9;

/// Writes bridge values at `times` into `out` and returns the first index
/// whose time is at least `r`. `times` must be non-negative and increasing.
///
/// The driving Brownian motion is simulated on `times ∪ {r}`; one normal is
/// drawn per positive increment below `r` plus one for the step to `r`.
pub fn sample_bridge_into(r: f64, z: f64, times: &[f64], rng: &mut SourceRng, out: &mut [f64]) -> Option<usize> {
    debug_assert_eq!(times.len(), out.len());
    let mut w = 0.0;
    let mut prev = 0.0;
    let mut cut = times.len();
    for (k, &t) in times.iter().enumerate() {
        if t >= r {
            cut = k;
            break;
        }
        if t > prev {
            w += (t - prev).sqrt() * standard_normal(rng);
            prev = t;
        }
        out[k] = w;
    }
    let w_r = w + (r - prev).sqrt() * standard_normal(rng);
    let shift = (z - w_r) / r;
    for k in 0..cut {
        out[k] += times[k] * shift;
    }
    for v in &mut out[cut..] {
        *v = z;
    }
    (cut < times.len()).then_some(cut)
}

/// Exact simulation of the bridge on `grid`.
pub fn sample_bridge(spec: &BridgeSpec, grid: &TimeGrid, rng: &mut SourceRng) -> PathSample {
    let times = grid.times().to_vec();
    let mut values = vec![0.0; times.len()];
    let absorb_index = sample_bridge_into(spec.length(), spec.pin(), &times, rng, &mut values);
    PathSample { times, values, realized_length: spec.length(), realized_pin: spec.pin(), absorb_index }
}

/// Output of [`euler_bridge`].
#[derive(Debug, Clone)]
pub struct EulerBridgeRun {
    pub path: PathSample,
    /// Number of steps where the drift hit [`DRIFT_CAP`].
    pub capped_steps: usize,
}

/// Euler–Maruyama integration of the bridge SDE on `grid`. The state is set
/// to the pin at the first grid time within [`SNAP_WINDOW`] of the length or
/// beyond it.
pub fn euler_bridge(spec: &BridgeSpec, grid: &TimeGrid, rng: &mut SourceRng) -> Result<EulerBridgeRun> {
    let times = grid.times();
    if times.len() < 2 {
        return Err(Error::Input("Euler integration needs at least one step".into()));
    }
    let (r, z) = (spec.length(), spec.pin());
    let mut values = Vec::with_capacity(times.len());
    values.push(0.0);
    let mut x = 0.0;
    let mut capped_steps = 0;
    let mut absorb_index = None;
    for k in 1..times.len() {
        let (s, t) = (times[k - 1], times[k]);
        if absorb_index.is_none() {
            if t >= r - SNAP_WINDOW {
                x = z;
                absorb_index = Some(k);
            } else {
                let mut b = (z - x) / (r - s);
                if b.abs() > DRIFT_CAP {
                    b = DRIFT_CAP.copysign(b);
                    capped_steps += 1;
                }
                let h = t - s;
                x += b * h + h.sqrt() * standard_normal(rng);
            }
        }
        values.push(x);
    }
    Ok(EulerBridgeRun {
        path: PathSample { times: times.to_vec(), values, realized_length: r, realized_pin: z, absorb_index },
        capped_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gaussian_core::rng_stream;

    #[test]
    fn pin_is_hit_exactly() {
        let spec = BridgeSpec::new(1.0, 5.0).unwrap();
        let grid = TimeGrid::uniform(2.0, 20).unwrap();
        let mut rng = rng_stream(1, 0);
        let p = sample_bridge(&spec, &grid, &mut rng);
        assert_eq!(p.values[0], 0.0);
        assert_eq!(p.absorb_index, Some(10));
        for k in 10..=20 {
            assert_eq!(p.values[k], 5.0);
        }
    }

    #[test]
    fn zero_pin_at_length() {
        let spec = BridgeSpec::new(1.0, 0.0).unwrap();
        let grid = TimeGrid::new(vec![0.0, 0.5, 1.0]).unwrap();
        let p = sample_bridge(&spec, &grid, &mut rng_stream(9, 9));
        assert_eq!(p.values[2], 0.0);
    }

    #[test]
    fn euler_snaps_to_pin() {
        let spec = BridgeSpec::new(1.0, 2.0).unwrap();
        let grid = TimeGrid::uniform(1.5, 150).unwrap();
        let run = euler_bridge(&spec, &grid, &mut rng_stream(3, 1)).unwrap();
        let k = run.path.absorb_index.unwrap();
        assert!((grid.times()[k] - 1.0).abs() < 1e-9);
        assert!(run.path.values[k..].iter().all(|&v| v == 2.0));
    }
}
