use distributions::quadrature::composite_legendre;
use std::sync::OnceLock;

/// Bounded function `g(r, z, y)` of the length, the pin and a future value.
pub trait Payoff: Sync {
    fn value(&self, length: f64, pin: f64, y: f64) -> f64;

    /// Points where `g` jumps as a function of the pin or future value.
    /// Quadrature over a continuous pin places breakpoints there.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `E[g(r, z, Y)]` for `Y ~ N(mean, var)`. The default integrates
    /// numerically over ten standard deviations.
    fn gauss_expect(&self, length: f64, pin: f64, mean: f64, var: f64) -> f64 {
        let sd = var.sqrt();
        if sd == 0.0 {
            return self.value(length, pin, mean);
        }
        unit_rule().iter().map(|&(s, w)| w * self.value(length, pin, mean + sd * s) * (-0.5 * s * s).exp()).sum::<f64>()
            / (2.0 * std::f64::consts::PI).sqrt()
    }
}

fn unit_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| composite_legendre(-10.0, 10.0, 40, 8))
}

/// Standard normal CDF.
pub(crate) fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Common payoffs with closed-form Gaussian expectations where available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// `c`
    Constant(f64),
    /// `y`
    Value,
    /// `1{y > c}`
    Above(f64),
    /// `1 / (1 + exp(-(y - center) / scale))`
    Logistic { center: f64, scale: f64 },
    /// `1{r ≤ s}`
    LengthAtMost(f64),
    /// `1{z = c}`
    PinIs(f64),
    /// `z`
    Pin,
}

impl Payoff for Observable {
    fn value(&self, length: f64, pin: f64, y: f64) -> f64 {
        match *self {
            Self::Constant(c) => c,
            Self::Value => y,
            Self::Above(c) => f64::from(u8::from(y > c)),
            Self::Logistic { center, scale } => 1.0 / (1.0 + (-(y - center) / scale).exp()),
            Self::LengthAtMost(s) => f64::from(u8::from(length <= s)),
            Self::PinIs(c) => f64::from(u8::from(pin == c)),
            Self::Pin => pin,
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match *self {
            Self::Above(c) => vec![c],
            _ => Vec::new(),
        }
    }

    fn gauss_expect(&self, length: f64, pin: f64, mean: f64, var: f64) -> f64 {
        match *self {
            Self::Value => mean,
            Self::Above(c) => {
                if var == 0.0 {
                    self.value(length, pin, mean)
                } else {
                    norm_cdf((mean - c) / var.sqrt())
                }
            }
            Self::Logistic { .. } => {
                let sd = var.sqrt();
                if sd == 0.0 {
                    return self.value(length, pin, mean);
                }
                unit_rule()
                    .iter()
                    .map(|&(s, w)| w * self.value(length, pin, mean + sd * s) * (-0.5 * s * s).exp())
                    .sum::<f64>()
                    / (2.0 * std::f64::consts::PI).sqrt()
            }
            _ => self.value(length, pin, mean),
        }
    }
}

/// Adapter for closures `g(r, z, y)`; Gaussian expectations use the
/// numerical default.
pub struct FnPayoff<F>(pub F);

impl<F: Fn(f64, f64, f64) -> f64 + Sync> Payoff for FnPayoff<F> {
    fn value(&self, length: f64, pin: f64, y: f64) -> f64 {
        (self.0)(length, pin, y)
    }
}
