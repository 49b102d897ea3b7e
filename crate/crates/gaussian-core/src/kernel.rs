use crate::{Error, Result};

/// ln(sqrt(2π)).
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Log of the centred Gaussian kernel with variance `t` at displacement `d`.
/// No domain check; callers guarantee `t > 0`.
#[inline]
pub fn ln_kernel(t: f64, d: f64) -> f64 {
    -0.5 * d * d / t - 0.5 * t.ln() - LN_SQRT_2PI
}

fn check_variance(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("variance must be positive and finite, got {t}")))
    }
}

/// Density at `x` of the normal law with variance `t` and mean `y`.
pub fn gauss_pdf(t: f64, x: f64, y: f64) -> Result<f64> {
    check_variance(t)?;
    Ok(ln_kernel(t, x - y).exp())
}

/// Logarithm of [`gauss_pdf`]; stays finite where the density underflows.
pub fn gauss_logpdf(t: f64, x: f64, y: f64) -> Result<f64> {
    check_variance(t)?;
    Ok(ln_kernel(t, x - y))
}

/// A validated (variance, mean) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussParams {
    variance: f64,
    mean: f64,
}

impl GaussParams {
    pub fn new(variance: f64, mean: f64) -> Result<Self> {
        check_variance(variance)?;
        if !mean.is_finite() {
            return Err(Error::Domain(format!("mean must be finite, got {mean}")));
        }
        Ok(Self { variance, mean })
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        ln_kernel(self.variance, x - self.mean)
    }
}
