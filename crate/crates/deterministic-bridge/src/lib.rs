//! Brownian bridge of fixed length `r` pinned at `z`, held at `z` after `r`.

mod density;
mod grid;
mod sample;

pub use density::{
    bridge_drift, bridge_fdd_logpdf, bridge_fdd_pdf, bridge_marginal_logpdf, bridge_marginal_pdf,
    bridge_transition_alt_pdf, bridge_transition_logpdf, bridge_transition_pdf, transition_moments,
};
pub use grid::{PathSample, TimeGrid};
pub use sample::{euler_bridge, sample_bridge, sample_bridge_into, EulerBridgeRun, DRIFT_CAP, SNAP_WINDOW};

use gaussian_core::{Error, Result};

/// Length and pin of a bridge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeSpec {
    length: f64,
    pin: f64,
}

impl BridgeSpec {
    pub fn new(length: f64, pin: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("bridge length must be positive, got {length}")));
        }
        if !pin.is_finite() {
            return Err(Error::Domain(format!("bridge pin must be finite, got {pin}")));
        }
        Ok(Self { length, pin })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn pin(&self) -> f64 {
        self.pin
    }
}
