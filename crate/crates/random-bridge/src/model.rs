use deterministic_bridge::{sample_bridge_into, PathSample, TimeGrid};
use distributions::{LengthLaw, PinLaw};
use gaussian_core::PathRng;

/// Random length and pin, independent of each other and of the noise.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomBridgeModel {
    length: LengthLaw,
    pin: PinLaw,
}

/// Hidden quantities of one simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledPath {
    pub length: f64,
    pub pin: f64,
    pub absorb_index: Option<usize>,
}

impl RandomBridgeModel {
    pub fn new(length: LengthLaw, pin: PinLaw) -> Self {
        Self { length, pin }
    }

    pub fn length(&self) -> &LengthLaw {
        &self.length
    }

    pub fn pin(&self) -> &PinLaw {
        &self.pin
    }

    /// Draws `(τ, Z)` from their dedicated streams.
    pub fn sample_hidden(&self, rng: &mut PathRng) -> (f64, f64) {
        (self.length.sample(&mut rng.length), self.pin.sample(&mut rng.pin))
    }

    /// Writes one path at `times` into `out`.
    pub fn sample_into(&self, times: &[f64], rng: &mut PathRng, out: &mut [f64]) -> SampledPath {
        let (length, pin) = self.sample_hidden(rng);
        let absorb_index = sample_bridge_into(length, pin, times, &mut rng.noise, out);
        SampledPath { length, pin, absorb_index }
    }

    pub fn sample_path(&self, grid: &TimeGrid, rng: &mut PathRng) -> PathSample {
        let times = grid.times().to_vec();
        let mut values = vec![0.0; times.len()];
        let s = self.sample_into(&times, rng, &mut values);
        PathSample { times, values, realized_length: s.length, realized_pin: s.pin, absorb_index: s.absorb_index }
    }

    /// Like [`Self::sample_path`], but continues the grid with its last
    /// step until the path has been absorbed.
    pub fn sample_path_until_absorbed(&self, grid: &TimeGrid, rng: &mut PathRng) -> PathSample {
        let (length, pin) = self.sample_hidden(rng);
        let mut times = grid.times().to_vec();
        let n = times.len();
        let step = if n >= 2 { times[n - 1] - times[n - 2] } else { 1.0 };
        let start = times[n - 1];
        let mut k = 1usize;
        while times[times.len() - 1] < length {
            times.push(start + k as f64 * step);
            k += 1;
        }
        let mut values = vec![0.0; times.len()];
        let absorb_index = sample_bridge_into(length, pin, &times, &mut rng.noise, &mut values);
        PathSample { times, values, realized_length: length, realized_pin: pin, absorb_index }
    }
}
