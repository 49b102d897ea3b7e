/// `ln Σ exp(v)`; `-inf` for an empty slice or all `-inf` entries.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Streaming log-sum-exp.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    max: f64,
    scaled: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogAccumulator {
    pub fn add(&mut self, lv: f64) {
        if lv == f64::NEG_INFINITY {
            return;
        }
        if lv <= self.max {
            self.scaled += (lv - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - lv).exp() + 1.0;
            self.max = lv;
        }
    }

    pub fn ln_total(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// Log-space sum of terms with arbitrary sign, kept as separate positive and
/// negative accumulators.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignedLogSum {
    pos: LogAccumulator,
    neg: LogAccumulator,
}

impl SignedLogSum {
    /// Adds `sign · exp(lv)`.
    pub fn add(&mut self, sign: f64, lv: f64) {
        if sign > 0.0 {
            self.pos.add(lv);
        } else if sign < 0.0 {
            self.neg.add(lv);
        }
    }

    /// The total divided by `exp(ln_scale)`.
    pub fn scaled_value(&self, ln_scale: f64) -> f64 {
        (self.pos.ln_total() - ln_scale).exp() - (self.neg.ln_total() - ln_scale).exp()
    }
}
