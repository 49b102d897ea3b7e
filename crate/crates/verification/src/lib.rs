//! Brute-force oracles for the closed forms: binned conditional Monte Carlo,
//! classical tests, and the scripted suites that drive them.

pub mod conditional;
pub mod paths;
pub mod report;
pub mod stats;
mod suites;

pub use conditional::{mc_conditional, mc_conditional_many, Bin, ConditioningSpec, Draw, McEstimate, Query};
pub use report::{Rule, SuiteConfig, TestCase, TestReport};
pub use suites::{run_suite, SUITES};
