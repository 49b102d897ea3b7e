//! Declarative run configuration, read from TOML.

use crate::CliError;
use deterministic_bridge::TimeGrid;
use distributions::{LengthLaw, PinLaw};
use info_process::InfoModel;
use random_bridge::RandomBridgeModel;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<LengthSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pin: Option<PinSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub simulate: SimulateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityQuery>,
    #[serde(default)]
    pub filter: FilterSpec,
    #[serde(default)]
    pub verify: VerifySpec,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            out: default_out(),
            length: None,
            pin: None,
            grid: None,
            simulate: SimulateSpec::default(),
            density: None,
            filter: FilterSpec::default(),
            verify: VerifySpec::default(),
        }
    }
}

/// Law of the bridge length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LengthSpec {
    Exponential {
        rate: f64,
    },
    TwoPoint {
        t1: f64,
        t2: f64,
        p1: f64,
    },
    PointMass {
        t: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Piecewise-linear density through the given knots.
    Table {
        xs: Vec<f64>,
        density: Vec<f64>,
    },
}

/// Law of the pinning point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PinSpec {
    DiscretePins { points: Vec<f64>, probs: Vec<f64> },
    GaussianPin { mean: f64, sd: f64 },
    PointMass { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Table { xs: Vec<f64>, density: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Sample `(τ, Z)` and draw the Gaussian bridge exactly on the grid.
    #[default]
    Exact,
    /// Euler scheme on the two-pin information process.
    Euler,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSpec {
    pub paths: usize,
    pub method: Method,
    /// Keep stepping past the grid end until each path is absorbed.
    pub extend_to_absorption: bool,
    pub file: String,
}

impl Default for SimulateSpec {
    fn default() -> Self {
        Self { paths: 10, method: Method::Exact, extend_to_absorption: false, file: "paths.csv".into() }
    }
}

/// Evaluation points `lo, lo + d, ..., hi` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) || self.n == 0 {
            return Err(CliError::Config(format!("invalid axis {self:?}")));
        }
        if self.n == 1 {
            return Ok(vec![self.lo]);
        }
        let d = (self.hi - self.lo) / (self.n - 1) as f64;
        Ok((0..self.n).map(|i| if i + 1 == self.n { self.hi } else { self.lo + i as f64 * d }).collect())
    }
}

/// Density evaluation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityQuery {
    /// Marginal of a bridge of length `r` to `z` at time `t`.
    Marginal { r: f64, z: f64, t: f64, grid: AxisSpec },
    /// Bridge transition density from `(t, x)` to time `u`.
    Transition { r: f64, z: f64, t: f64, x: f64, u: f64, grid: AxisSpec },
    /// Mixed transition law of the two-pin process from `(t, x)` to `u`.
    /// `absorbed` defaults to whether `x` equals a pin.
    InfoTransition {
        t: f64,
        x: f64,
        u: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        absorbed: Option<bool>,
        grid: AxisSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSpec {
    /// CSV with columns `t,value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observations: Option<PathBuf>,
    pub file: String,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self { observations: None, file: "filter.json".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySpec {
    /// Suite names; empty means all.
    pub suites: Vec<String>,
    pub scale: f64,
    pub drift_scale: f64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self { suites: Vec::new(), scale: 1.0, drift_scale: 1.0 }
    }
}

fn domain(e: gaussian_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn length_law(&self) -> Result<LengthLaw, CliError> {
        let spec = self.length.as_ref().ok_or_else(|| CliError::Config("missing [length] section".into()))?;
        spec.build()
    }

    pub fn pin_law(&self) -> Result<PinLaw, CliError> {
        let spec = self.pin.as_ref().ok_or_else(|| CliError::Config("missing [pin] section".into()))?;
        spec.build()
    }

    pub fn bridge_model(&self) -> Result<RandomBridgeModel, CliError> {
        Ok(RandomBridgeModel::new(self.length_law()?, self.pin_law()?))
    }

    /// The two-pin model; the pin law must be discrete with two points.
    pub fn info_model(&self) -> Result<InfoModel, CliError> {
        match &self.pin {
            Some(PinSpec::DiscretePins { points, probs }) if points.len() == 2 && probs.len() == 2 => {
                InfoModel::new(self.length_law()?, points[0], points[1], probs[0]).map_err(domain)
            }
            _ => Err(CliError::Config("this command needs a discrete_pins pin law with two points".into())),
        }
    }

    pub fn time_grid(&self) -> Result<TimeGrid, CliError> {
        let g = self.grid.ok_or_else(|| CliError::Config("missing [grid] section".into()))?;
        if g.n_steps == 0 {
            return Err(CliError::Config("grid.n_steps must be positive".into()));
        }
        if !(g.t_max > 0.0 && g.t_max.is_finite()) {
            return Err(CliError::Config(format!("grid.t_max must be positive, got {}", g.t_max)));
        }
        TimeGrid::uniform(g.t_max, g.n_steps).map_err(domain)
    }
}

impl LengthSpec {
    pub fn build(&self) -> Result<LengthLaw, CliError> {
        match self {
            Self::Exponential { rate } => LengthLaw::exponential(*rate),
            Self::TwoPoint { t1, t2, p1 } => LengthLaw::two_point(*t1, *t2, *p1),
            Self::PointMass { t } => LengthLaw::point_mass(*t),
            Self::Uniform { lo, hi } => LengthLaw::uniform(*lo, *hi),
            Self::Table { xs, density } => LengthLaw::table(xs.clone(), density.clone()),
        }
        .map_err(domain)
    }
}

impl PinSpec {
    pub fn build(&self) -> Result<PinLaw, CliError> {
        match self {
            Self::DiscretePins { points, probs } => PinLaw::discrete(points.clone(), probs.clone()),
            Self::GaussianPin { mean, sd } => PinLaw::gaussian(*mean, *sd),
            Self::PointMass { value } => PinLaw::discrete(vec![*value], vec![1.0]),
            Self::Uniform { lo, hi } => PinLaw::uniform(*lo, *hi),
            Self::Table { xs, density } => PinLaw::table(xs.clone(), density.clone()),
        }
        .map_err(domain)
    }
}
