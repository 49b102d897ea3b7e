//! Density evaluation on a grid.

use crate::config::{Config, DensityQuery};
use crate::{write_json, CliError};
use deterministic_bridge::{bridge_marginal_pdf, bridge_transition_pdf, BridgeSpec};
use info_process::{info_transition, Observation};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityOutput {
    pub kind: &'static str,
    /// Evaluation points; `x` for marginals, `y` for transitions.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Point masses keyed `z1`, `z2`, for the two-pin kernel only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<BTreeMap<String, f64>>,
    /// Atoms plus the integral of the density part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
}

pub fn evaluate(cfg: &Config) -> Result<DensityOutput, CliError> {
    let query = cfg.density.as_ref().ok_or_else(|| CliError::Config("missing [density] section".into()))?;
    let domain = |e: gaussian_core::Error| CliError::Config(e.to_string());
    match query {
        DensityQuery::Marginal { r, z, t, grid } => {
            let spec = BridgeSpec::new(*r, *z).map_err(domain)?;
            let xs = grid.points()?;
            let values =
                xs.iter().map(|&x| bridge_marginal_pdf(&spec, *t, x)).collect::<Result<_, _>>().map_err(domain)?;
            Ok(DensityOutput { kind: "marginal", grid: xs, values, atoms: None, mass: None })
        }
        DensityQuery::Transition { r, z, t, x, u, grid } => {
            let spec = BridgeSpec::new(*r, *z).map_err(domain)?;
            let ys = grid.points()?;
            let values = ys
                .iter()
                .map(|&y| bridge_transition_pdf(&spec, *t, *x, *u, y))
                .collect::<Result<_, _>>()
                .map_err(domain)?;
            Ok(DensityOutput { kind: "transition", grid: ys, values, atoms: None, mass: None })
        }
        DensityQuery::InfoTransition { t, x, u, absorbed, grid } => {
            let model = cfg.info_model()?;
            let absorbed = absorbed.unwrap_or_else(|| Observation::classify(&model, *t, *x).absorbed);
            let kernel = info_transition(&model, *t, *x, absorbed, *u).map_err(domain)?;
            let [a1, a2] = kernel.atoms();
            let atoms = BTreeMap::from([("z1".to_string(), a1), ("z2".to_string(), a2)]);
            let (ys, values) = if absorbed {
                (Vec::new(), Vec::new())
            } else {
                let ys = grid.points()?;
                let values = ys.iter().map(|&y| kernel.lebesgue(y)).collect::<Result<Vec<_>, _>>()?;
                (ys, values)
            };
            let mass = kernel.total_mass()?;
            Ok(DensityOutput { kind: "info_transition", grid: ys, values, atoms: Some(atoms), mass: Some(mass) })
        }
    }
}

/// Evaluates and writes `out/density.json`.
pub fn run(cfg: &Config) -> Result<PathBuf, CliError> {
    let result = evaluate(cfg)?;
    let target = cfg.out.join("density.json");
    write_json(&target, &result)?;
    Ok(target)
}
