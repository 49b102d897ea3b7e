//! Bridge information process: a random-length bridge pinned at one of two
//! points `z1` (probability `p1`) or `z2`.
//!
//! All integrals over the length use the weight
//! `φ_s^i(r, x) = sqrt(r/(r-s)) exp(-½((z_i-x)²/(r-s) - z_i²/r))` for `r > s`,
//! the likelihood ratio of a non-absorbed observation `x` at time `s` under
//! `(τ, Z) = (r, z_i)`.

mod drift;
mod euler;
mod filter;
mod kernel;
mod model;
mod phi;
mod probe;

pub use drift::info_drift;
pub use euler::{euler_simulate_info, step_law, EulerInfoRun, EulerOptions, StepLaw, MAX_STEP};
pub use filter::{info_filter_state, info_posterior, info_predict, FilterState};
pub use kernel::{info_transition, MixedDensity};
pub use model::{InfoModel, Observation};
pub use phi::{ln_phi_weight, phi_weight};
pub use probe::{right_continuity_probe, unconditional_expectation, ProbeResult};
