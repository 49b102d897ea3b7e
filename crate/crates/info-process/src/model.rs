use distributions::{LengthLaw, PinLaw};
use gaussian_core::{Error, Result};
use random_bridge::RandomBridgeModel;

/// Random length plus a two-point pin.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoModel {
    length: LengthLaw,
    pins: [f64; 2],
    probs: [f64; 2],
}

impl InfoModel {
    pub fn new(length: LengthLaw, z1: f64, z2: f64, p1: f64) -> Result<Self> {
        if !(z1.is_finite() && z2.is_finite()) || z1 == z2 {
            return Err(Error::Config(format!("pins must be finite and distinct, got {z1}, {z2}")));
        }
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::Config(format!("first pin probability must lie in (0, 1), got {p1}")));
        }
        Ok(Self { length, pins: [z1, z2], probs: [p1, 1.0 - p1] })
    }

    pub fn length(&self) -> &LengthLaw {
        &self.length
    }

    pub fn pins(&self) -> [f64; 2] {
        self.pins
    }

    pub fn probs(&self) -> [f64; 2] {
        self.probs
    }

    /// Index of the pin equal to `x` bit for bit.
    pub fn pin_index(&self, x: f64) -> Option<usize> {
        self.pins.iter().position(|&z| z == x)
    }

    /// The same process viewed as a random bridge, for exact path sampling.
    pub fn as_random_bridge(&self) -> RandomBridgeModel {
        let pin = PinLaw::discrete(self.pins.to_vec(), self.probs.to_vec()).expect("validated at construction");
        RandomBridgeModel::new(self.length.clone(), pin)
    }
}

/// One observation of the process: time, value, and whether the value is
/// known to be an absorbed pin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub time: f64,
    pub value: f64,
    pub absorbed: bool,
}

impl Observation {
    /// Absorption is read off the value: equality with a pin, bit for bit.
    pub fn classify(model: &InfoModel, time: f64, value: f64) -> Self {
        Self { time, value, absorbed: model.pin_index(value).is_some() }
    }
}
