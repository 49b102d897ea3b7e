use gaussian_core::{Error, Result};

/// Probability density that is linear between knots and zero outside them,
/// normalized by the trapezoid rule at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    cum: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::Config("table needs at least two knots and one density value per knot".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("table knots must be finite and strictly increasing".into()));
        }
        if ys.iter().any(|y| !(*y >= 0.0 && y.is_finite())) {
            return Err(Error::Config("table density values must be finite and nonnegative".into()));
        }
        let mut cum = vec![0.0; xs.len()];
        for k in 1..xs.len() {
            cum[k] = cum[k - 1] + 0.5 * (ys[k] + ys[k - 1]) * (xs[k] - xs[k - 1]);
        }
        let total = cum[xs.len() - 1];
        if !(total > 0.0) {
            return Err(Error::Config("table density has zero mass".into()));
        }
        let ys = ys.iter().map(|y| y / total).collect();
        let cum = cum.iter().map(|c| c / total).collect();
        Ok(Self { xs, ys, cum })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    fn segment(&self, x: f64) -> usize {
        self.xs.partition_point(|&k| k <= x).saturating_sub(1).min(self.xs.len() - 2)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo() || x > self.hi() {
            return 0.0;
        }
        let k = self.segment(x);
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let s = (x - x0) / (x1 - x0);
        self.ys[k] + s * (self.ys[k + 1] - self.ys[k])
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo() {
            return 0.0;
        }
        if x >= self.hi() {
            return 1.0;
        }
        let k = self.segment(x);
        let d = x - self.xs[k];
        self.cum[k] + 0.5 * (self.ys[k] + self.pdf(x)) * d
    }

    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.lo();
        }
        if p >= 1.0 {
            return self.hi();
        }
        let k = self.cum.partition_point(|&c| c <= p).saturating_sub(1).min(self.xs.len() - 2);
        let h = self.xs[k + 1] - self.xs[k];
        let y0 = self.ys[k];
        let m = (self.ys[k + 1] - y0) / h;
        let target = p - self.cum[k];
        let disc = (y0 * y0 + 2.0 * m * target).max(0.0);
        let denom = y0 + disc.sqrt();
        let s = if denom > 0.0 { 2.0 * target / denom } else { 0.0 };
        (self.xs[k] + s.clamp(0.0, h)).min(self.hi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_law() {
        let t = PiecewiseLinear::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert!((t.pdf(1.0) - 1.0).abs() < 1e-15);
        assert!((t.cdf(1.0) - 0.5).abs() < 1e-15);
        assert!((t.cdf(0.5) - 0.125).abs() < 1e-15);
        for p in [0.01, 0.125, 0.3, 0.5, 0.77, 0.999] {
            assert!((t.cdf(t.quantile(p)) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(PiecewiseLinear::new(vec![0.0], vec![1.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 1.0], vec![-1.0, 1.0]).is_err());
    }
}
