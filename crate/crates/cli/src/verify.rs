//! Runs verification suites and writes one JSON report per suite.

use crate::config::Config;
use crate::{write_json, CliError};
use std::time::Instant;
use verification::{run_suite, SuiteConfig, TestReport, SUITES};

pub struct VerifyOutcome {
    pub reports: Vec<TestReport>,
    /// Wall-clock seconds per suite, in report order.
    pub runtimes: Vec<f64>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(TestReport::passed)
    }
}

pub fn suite_names(cfg: &Config) -> Result<Vec<String>, CliError> {
    let names: Vec<String> = if cfg.verify.suites.is_empty() || cfg.verify.suites.iter().any(|s| s == "all") {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        cfg.verify.suites.clone()
    };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
        return Err(CliError::Config(format!("unknown suite {bad:?}; known: {}", SUITES.join(", "))));
    }
    Ok(names)
}

/// Runs the selected suites, writing `out/<suite>.json` after each one.
pub fn run(cfg: &Config) -> Result<VerifyOutcome, CliError> {
    let names = suite_names(cfg)?;
    let suite_cfg = SuiteConfig { seed: cfg.seed, scale: cfg.verify.scale, drift_scale: cfg.verify.drift_scale };
    if !(suite_cfg.scale > 0.0 && suite_cfg.scale.is_finite()) {
        return Err(CliError::Config(format!("verify.scale must be positive, got {}", suite_cfg.scale)));
    }
    let mut outcome = VerifyOutcome { reports: Vec::new(), runtimes: Vec::new() };
    for name in &names {
        let start = Instant::now();
        let report = run_suite(name, &suite_cfg)?;
        outcome.runtimes.push(start.elapsed().as_secs_f64());
        write_json(&cfg.out.join(format!("{name}.json")), &report)?;
        outcome.reports.push(report);
    }
    Ok(outcome)
}
