use crate::piecewise::PiecewiseLinear;
use gaussian_core::{ln_kernel, standard_normal, Error, Result, SourceRng};
use libm::erfc;
use rand::Rng;

/// Half-width, in standard deviations, of the quadrature support of a
/// Gaussian pin.
pub const GAUSSIAN_PIN_HALF_WIDTH: f64 = 8.0;

/// Absolutely continuous pin law.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousPin {
    Gaussian { mean: f64, sd: f64 },
    Uniform { lo: f64, hi: f64 },
    Table(PiecewiseLinear),
}

/// Law of the pinning point.
#[derive(Debug, Clone, PartialEq)]
pub enum PinLaw {
    Discrete { points: Vec<f64>, probs: Vec<f64> },
    Continuous(ContinuousPin),
}

impl PinLaw {
    pub fn discrete(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(Error::Config("discrete pin needs matching non-empty points and probabilities".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("pin points must be finite".into()));
        }
        if probs.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::Config("pin probabilities must be nonnegative".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("pin probabilities sum to {s}, expected 1")));
        }
        let mut sorted = points.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("pin points must be distinct".into()));
        }
        Ok(Self::Discrete { points, probs })
    }

    /// Binomial(n, p) on `{0, …, n}`.
    pub fn binomial(n: u32, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("binomial success probability must lie in [0, 1], got {p}")));
        }
        let mut probs = Vec::with_capacity(n as usize + 1);
        let mut c = 1.0f64;
        for k in 0..=n {
            if k > 0 {
                c *= (n - k + 1) as f64 / k as f64;
            }
            probs.push(c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32));
        }
        let s: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|q| *q /= s);
        Self::discrete((0..=n).map(f64::from).collect(), probs)
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
            return Err(Error::Config(format!("gaussian pin needs finite mean and sd > 0, got {mean}, {sd}")));
        }
        Ok(Self::Continuous(ContinuousPin::Gaussian { mean, sd }))
    }

    pub fn standard_normal() -> Self {
        Self::Continuous(ContinuousPin::Gaussian { mean: 0.0, sd: 1.0 })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(Error::Config(format!("uniform pin needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self::Continuous(ContinuousPin::Uniform { lo, hi }))
    }

    pub fn table(xs: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        Ok(Self::Continuous(ContinuousPin::Table(PiecewiseLinear::new(xs, density)?)))
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete { .. })
    }

    /// Index of the pin point equal to `x`, compared bit for bit.
    pub fn atom_index(&self, x: f64) -> Option<usize> {
        match self {
            Self::Discrete { points, .. } => points.iter().position(|&p| p == x),
            Self::Continuous(_) => None,
        }
    }

    pub fn sample(&self, rng: &mut SourceRng) -> f64 {
        match self {
            Self::Discrete { points, probs } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (z, p) in points.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return *z;
                    }
                }
                points[points.len() - 1]
            }
            Self::Continuous(ContinuousPin::Gaussian { mean, sd }) => mean + sd * standard_normal(rng),
            Self::Continuous(ContinuousPin::Uniform { lo, hi }) => lo + (hi - lo) * rng.random::<f64>(),
            Self::Continuous(ContinuousPin::Table(t)) => t.quantile(rng.random()),
        }
    }

    /// `P(Z ≤ z)`.
    pub fn cdf(&self, z: f64) -> f64 {
        match self {
            Self::Discrete { points, probs } => {
                points.iter().zip(probs).filter(|(p, _)| **p <= z).map(|(_, q)| q).sum()
            }
            Self::Continuous(c) => c.cdf(z),
        }
    }
}

impl ContinuousPin {
    pub fn pdf(&self, z: f64) -> f64 {
        match self {
            Self::Gaussian { mean, sd } => ln_kernel(sd * sd, z - mean).exp(),
            Self::Uniform { lo, hi } => {
                if z < *lo || z > *hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
            Self::Table(t) => t.pdf(z),
        }
    }

    pub fn ln_pdf(&self, z: f64) -> f64 {
        match self {
            Self::Gaussian { mean, sd } => ln_kernel(sd * sd, z - mean),
            _ => self.pdf(z).ln(),
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        match self {
            Self::Gaussian { mean, sd } => 0.5 * erfc(-(z - mean) / (sd * std::f64::consts::SQRT_2)),
            Self::Uniform { lo, hi } => ((z - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Table(t) => t.cdf(z),
        }
    }

    /// Interval used for quadrature over the pin.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian { mean, sd } => (mean - GAUSSIAN_PIN_HALF_WIDTH * sd, mean + GAUSSIAN_PIN_HALF_WIDTH * sd),
            Self::Uniform { lo, hi } => (*lo, *hi),
            Self::Table(t) => (t.lo(), t.hi()),
        }
    }

    /// Interior points where the density is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Self::Table(t) => t.knots().to_vec(),
            _ => Vec::new(),
        }
    }

    /// Rough length scale of the density, used to size quadrature panels.
    pub fn scale(&self) -> f64 {
        match self {
            Self::Gaussian { sd, .. } => *sd,
            Self::Uniform { lo, hi } => hi - lo,
            Self::Table(t) => t.knots().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min),
        }
    }
}
