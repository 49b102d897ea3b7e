use gaussian_core::{Error, Result};

/// Strictly increasing observation times starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Input("time grid is empty".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::Input(format!("time grid must start at 0, starts at {}", times[0])));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::Input(format!("time grid not strictly increasing at {} -> {}", w[0], w[1])));
        }
        Ok(Self { times })
    }

    /// `n_steps` equal steps on `[0, t_max]`.
    pub fn uniform(t_max: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Input("grid needs at least one step".into()));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::Input(format!("grid horizon must be positive, got {t_max}")));
        }
        let h = t_max / n_steps as f64;
        let mut times: Vec<f64> = (0..=n_steps).map(|k| k as f64 * h).collect();
        times[n_steps] = t_max;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Smallest index whose time is at least `t`.
    pub fn first_at_or_after(&self, t: f64) -> Option<usize> {
        let k = self.times.partition_point(|&s| s < t);
        (k < self.times.len()).then_some(k)
    }
}

/// One trajectory on a grid together with its hidden length and pin.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Realized length; `INFINITY` for simulated paths that never absorbed.
    pub realized_length: f64,
    /// Realized pin; `NaN` when unknown.
    pub realized_pin: f64,
    /// First grid index with time at or after the realized length.
    pub absorb_index: Option<usize>,
}

impl PathSample {
    pub fn is_absorbed_at(&self, k: usize) -> bool {
        self.absorb_index.is_some_and(|a| k >= a)
    }
}
