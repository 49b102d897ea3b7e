//! Path simulation and the canonical figure data sets.

use crate::config::{Config, GridSpec, LengthSpec, Method, PinSpec, SimulateSpec};
use crate::{write_file, CliError};
use deterministic_bridge::PathSample;
use info_process::EulerOptions;
use std::fmt::Write as _;
use std::path::PathBuf;
use verification::paths::{euler_paths, exact_paths};

pub const CSV_HEADER: &str = "path_id,t,value,absorbed";

/// Renders paths in the `path_id,t,value,absorbed` layout.
pub fn paths_csv<'a>(paths: impl IntoIterator<Item = &'a PathSample>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (id, p) in paths.into_iter().enumerate() {
        for (k, (t, v)) in p.times.iter().zip(&p.values).enumerate() {
            writeln!(out, "{id},{t:.16e},{v:.16e},{}", u8::from(p.is_absorbed_at(k))).expect("string write");
        }
    }
    out
}

pub fn simulate_paths(cfg: &Config) -> Result<Vec<PathSample>, CliError> {
    let grid = cfg.time_grid()?;
    let spec = &cfg.simulate;
    if spec.paths == 0 {
        return Err(CliError::Config("simulate.paths must be positive".into()));
    }
    match spec.method {
        Method::Exact => Ok(exact_paths(&cfg.bridge_model()?, &grid, spec.paths, cfg.seed, spec.extend_to_absorption)),
        Method::Euler => {
            if spec.extend_to_absorption {
                return Err(CliError::Config("extend_to_absorption needs the exact method".into()));
            }
            let runs = euler_paths(&cfg.info_model()?, &grid, spec.paths, cfg.seed, &EulerOptions::default())?;
            Ok(runs.into_iter().map(|r| r.path).collect())
        }
    }
}

/// Simulates and writes `out/<simulate.file>`.
pub fn run(cfg: &Config) -> Result<PathBuf, CliError> {
    let paths = simulate_paths(cfg)?;
    let target = cfg.out.join(&cfg.simulate.file);
    write_file(&target, paths_csv(&paths).as_bytes())?;
    Ok(target)
}

/// The three canonical path sets: exponential(0.1) length with a
/// binomial(3, 1/2) pin, with a standard normal pin, and with pins -4, 4 of
/// weights 0.3, 0.7. Paths run until absorbed.
pub fn figure_configs(base: &Config) -> Vec<Config> {
    let set = |file: &str, pin: PinSpec| Config {
        length: Some(LengthSpec::Exponential { rate: 0.1 }),
        pin: Some(pin),
        grid: Some(GridSpec { t_max: 40.0, n_steps: 4000 }),
        simulate: SimulateSpec {
            paths: base.simulate.paths,
            method: Method::Exact,
            extend_to_absorption: true,
            file: file.into(),
        },
        ..base.clone()
    };
    let binomial: Vec<f64> = [1.0, 3.0, 3.0, 1.0].iter().map(|c| c / 8.0).collect();
    vec![
        set("fig1_left.csv", PinSpec::DiscretePins { points: vec![0.0, 1.0, 2.0, 3.0], probs: binomial }),
        set("fig1_right.csv", PinSpec::GaussianPin { mean: 0.0, sd: 1.0 }),
        set("fig2.csv", PinSpec::DiscretePins { points: vec![-4.0, 4.0], probs: vec![0.3, 0.7] }),
    ]
}

pub fn figures(base: &Config) -> Result<Vec<PathBuf>, CliError> {
    figure_configs(base).iter().map(run).collect()
}
