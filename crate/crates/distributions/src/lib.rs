//! Laws of the random length `τ` and the random pin `Z`, and the quadrature
//! engine used for every integral against them.

mod length;
mod piecewise;
mod pin;
pub mod quadrature;

pub use length::{ContinuousLength, LengthLaw, LengthNode, DEFAULT_TAIL_LEVEL};
pub use piecewise::PiecewiseLinear;
pub use pin::{ContinuousPin, PinLaw, GAUSSIAN_PIN_HALF_WIDTH};
pub use quadrature::{Integral, QuadOptions};
