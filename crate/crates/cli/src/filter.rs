//! Filtering a sequence of observations of the two-pin process.

use crate::config::Config;
use crate::{write_json, CliError};
use info_process::{info_filter_state, InfoModel, Observation};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
struct ObservationRow {
    t: f64,
    value: f64,
}

/// Action suggested by the filter: settled at the upper pin means
/// withdraw, at the lower pin inject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Withdraw,
    Inject,
    Hold,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterRow {
    pub t: f64,
    pub value: f64,
    pub absorbed: bool,
    /// `P(τ ≤ t | observations)`.
    pub prob_settled: Option<f64>,
    pub prob_z1: Option<f64>,
    pub prob_z2: Option<f64>,
    /// `null` when the drift is infinite, which happens at time zero.
    pub drift: Option<f64>,
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterOutput {
    pub pins: [f64; 2],
    pub probs: [f64; 2],
    pub rows: Vec<FilterRow>,
}

pub fn read_observations(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let rows = reader
        .deserialize::<ObservationRow>()
        .map(|r| r.map(|o| (o.t, o.value)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(rows)
}

/// Filter state after each observation. Inference failures, including an
/// observation that leaves a pin after settling on it, are reported in the
/// row rather than aborting the run.
pub fn filter_rows(model: &InfoModel, observations: &[(f64, f64)]) -> Result<Vec<FilterRow>, CliError> {
    if observations.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(CliError::Config("observation times must be strictly increasing".into()));
    }
    let pins = model.pins();
    let mut settled: Option<usize> = None;
    let rows = observations
        .iter()
        .map(|&(t, value)| {
            let obs = Observation::classify(model, t, value);
            let mut row = FilterRow {
                t,
                value,
                absorbed: obs.absorbed,
                prob_settled: None,
                prob_z1: None,
                prob_z2: None,
                drift: None,
                decision: Decision::Hold,
                error: None,
            };
            let current = model.pin_index(value).filter(|_| obs.absorbed);
            if let Some(i) = settled {
                if current != Some(i) {
                    row.error = Some(format!("value {value} at time {t} after settling at pin {}", pins[i]));
                    return row;
                }
            }
            match info_filter_state(model, t, value, obs.absorbed) {
                Ok(state) => {
                    row.prob_settled = Some(state.prob_settled);
                    row.prob_z1 = Some(state.pin_probs[0]);
                    row.prob_z2 = Some(state.pin_probs[1]);
                    row.drift = state.drift.is_finite().then_some(state.drift);
                    if let Some(i) = current {
                        settled = Some(i);
                        row.decision = if pins[i] >= pins[1 - i] { Decision::Withdraw } else { Decision::Inject };
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    Ok(rows)
}

pub fn evaluate(cfg: &Config, observations: &Path) -> Result<FilterOutput, CliError> {
    let model = cfg.info_model()?;
    let obs = read_observations(observations)?;
    let rows = filter_rows(&model, &obs)?;
    Ok(FilterOutput { pins: model.pins(), probs: model.probs(), rows })
}

/// Filters and writes `out/<filter.file>`.
pub fn run(cfg: &Config) -> Result<PathBuf, CliError> {
    let obs = cfg.filter.observations.as_ref().ok_or_else(|| {
        CliError::Config("no observations file: set filter.observations or pass --observations".into())
    })?;
    let result = evaluate(cfg, obs)?;
    let target = cfg.out.join(&cfg.filter.file);
    write_json(&target, &result)?;
    Ok(target)
}
