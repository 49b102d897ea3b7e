use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Settings shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplier on every path count.
    pub scale: f64,
    /// Multiplier on the drift under test; anything but 1 is a deliberate
    /// corruption that the drift suite must catch.
    pub drift_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 20240611, scale: 1.0, drift_scale: 1.0 }
    }
}

impl SuiteConfig {
    /// Scaled path count, never below `floor`.
    pub fn paths(&self, base: usize, floor: usize) -> usize {
        ((base as f64 * self.scale).round() as usize).max(floor)
    }

    pub fn hash(&self, suite: &str) -> String {
        let body = serde_json::to_string(&(suite, self)).expect("plain data serializes");
        hex::encode(Sha256::digest(body.as_bytes()))
    }
}

/// How a case's z-score decides the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Pass when `|z| ≤ threshold`.
    Agree,
    /// Pass when `|z| > threshold`: the test must detect a difference.
    Reject,
    /// Pass when `|estimate - reference| ≤ threshold` (deterministic checks).
    Within,
    /// Pass when `estimate > threshold`.
    Exceeds,
    /// Pass when `estimate ≤ threshold`.
    AtMost,
    /// Reported only.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub name: String,
    pub estimate: f64,
    pub stderr: f64,
    pub reference: f64,
    pub z: f64,
    pub threshold: f64,
    pub rule: Rule,
    pub samples: u64,
    pub pass: bool,
}

impl TestCase {
    pub fn statistical(
        name: impl Into<String>,
        estimate: f64,
        stderr: f64,
        reference: f64,
        threshold: f64,
        rule: Rule,
        samples: u64,
    ) -> Self {
        let diff = estimate - reference;
        let z = if stderr > 0.0 {
            diff / stderr
        } else if diff == 0.0 {
            0.0
        } else if rule == Rule::Within && threshold > 0.0 {
            // Deterministic checks report the error in units of the tolerance.
            diff / threshold
        } else {
            f64::INFINITY.copysign(diff)
        };
        let pass = match rule {
            Rule::Agree => z.abs() <= threshold,
            Rule::Reject => z.abs() > threshold,
            Rule::Within => (estimate - reference).abs() <= threshold,
            Rule::Exceeds => estimate > threshold,
            Rule::AtMost => estimate <= threshold,
            Rule::Info => true,
        };
        Self { name: name.into(), estimate, stderr, reference, z, threshold, rule, samples, pass }
    }

    /// Deterministic comparison `|estimate - reference| ≤ tol`.
    pub fn within(name: impl Into<String>, estimate: f64, reference: f64, tol: f64) -> Self {
        Self::statistical(name, estimate, 0.0, reference, tol, Rule::Within, 0)
    }

    pub fn info(name: impl Into<String>, estimate: f64, stderr: f64, reference: f64, samples: u64) -> Self {
        Self::statistical(name, estimate, stderr, reference, f64::INFINITY, Rule::Info, samples)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub suite: String,
    pub theorem: String,
    pub cases: Vec<TestCase>,
    pub seed: u64,
    pub config_hash: String,
}

impl TestReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TestCase> {
        self.cases.iter().filter(|c| !c.pass)
    }
}
