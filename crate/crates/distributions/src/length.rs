use crate::piecewise::PiecewiseLinear;
use crate::quadrature::{adaptive_partition, kronrod_nodes, Integral, QuadOptions, VecIntegral};
use gaussian_core::{Error, Result, SourceRng};
use rand::Rng;

/// Default relative tail mass dropped beyond the quadrature cutoff.
pub const DEFAULT_TAIL_LEVEL: f64 = 1e-10;

/// Smallest offset `r - a` resolved by the logarithmic substitution.
const MIN_OFFSET: f64 = 1e-24;
/// Widest initial panel in the logarithmic variable.
const PANEL_WIDTH: f64 = 3.0;

/// Absolutely continuous component of a length law, normalized to mass one.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousLength {
    Exponential { rate: f64, shift: f64 },
    Uniform { lo: f64, hi: f64 },
    Table(PiecewiseLinear),
}

impl ContinuousLength {
    fn validate(&self) -> Result<()> {
        match self {
            Self::Exponential { rate, shift } => {
                if !(*rate > 0.0 && rate.is_finite()) || !(*shift >= 0.0 && shift.is_finite()) {
                    return Err(Error::Config(format!(
                        "exponential length needs rate > 0 and shift >= 0, got {rate}, {shift}"
                    )));
                }
            }
            Self::Uniform { lo, hi } => {
                if !(*lo >= 0.0 && hi > lo && hi.is_finite()) {
                    return Err(Error::Config(format!("uniform length needs 0 <= lo < hi, got [{lo}, {hi}]")));
                }
            }
            Self::Table(t) => {
                if t.lo() < 0.0 {
                    return Err(Error::Config("length table must live on [0, ∞)".into()));
                }
            }
        }
        Ok(())
    }

    pub fn pdf(&self, r: f64) -> f64 {
        match self {
            Self::Exponential { rate, shift } => {
                if r < *shift {
                    0.0
                } else {
                    rate * (-rate * (r - shift)).exp()
                }
            }
            Self::Uniform { lo, hi } => {
                if r < *lo || r > *hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
            Self::Table(t) => t.pdf(r),
        }
    }

    pub fn survival(&self, r: f64) -> f64 {
        match self {
            Self::Exponential { rate, shift } => {
                if r <= *shift {
                    1.0
                } else {
                    (-rate * (r - shift)).exp()
                }
            }
            Self::Uniform { lo, hi } => ((hi - r) / (hi - lo)).clamp(0.0, 1.0),
            Self::Table(t) => 1.0 - t.cdf(r),
        }
    }

    pub fn cdf(&self, r: f64) -> f64 {
        match self {
            Self::Exponential { rate, shift } => {
                if r <= *shift {
                    0.0
                } else {
                    -(-rate * (r - shift)).exp_m1()
                }
            }
            _ => 1.0 - self.survival(r),
        }
    }

    /// Point beyond which the survival function is at most `s`.
    pub fn survival_quantile(&self, s: f64) -> f64 {
        match self {
            Self::Exponential { rate, shift } => shift - s.ln() / rate,
            Self::Uniform { lo, hi } => hi - s * (hi - lo),
            Self::Table(t) => t.quantile(1.0 - s),
        }
    }

    pub fn lo(&self) -> f64 {
        match self {
            Self::Exponential { shift, .. } => *shift,
            Self::Uniform { lo, .. } => *lo,
            Self::Table(t) => t.lo(),
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            Self::Exponential { .. } => f64::INFINITY,
            Self::Uniform { hi, .. } => *hi,
            Self::Table(t) => t.hi(),
        }
    }

    fn knots(&self) -> &[f64] {
        match self {
            Self::Table(t) => t.knots(),
            _ => &[],
        }
    }

    fn sample(&self, u: f64) -> f64 {
        match self {
            Self::Exponential { rate, shift } => shift - (-u).ln_1p() / rate,
            Self::Uniform { lo, hi } => lo + u * (hi - lo),
            Self::Table(t) => t.quantile(u),
        }
    }
}

/// Law of a strictly positive random length: finitely many atoms plus an
/// optional absolutely continuous part.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthLaw {
    atoms: Vec<(f64, f64)>,
    continuous: Option<(ContinuousLength, f64)>,
    tail_level: f64,
}

/// One node of a discretized length law: the length, its offset above the
/// lower integration limit, and the probability weight it carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthNode {
    pub length: f64,
    pub offset: f64,
    pub weight: f64,
}

impl LengthLaw {
    /// Atoms `(time, weight)` plus a continuous component with the given
    /// mass. Weights must sum to one.
    pub fn new(mut atoms: Vec<(f64, f64)>, continuous: Option<(ContinuousLength, f64)>) -> Result<Self> {
        for &(t, w) in &atoms {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("length atoms must be strictly positive, got {t}")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Config(format!("atom weight must be nonnegative, got {w}")));
            }
        }
        atoms.retain(|&(_, w)| w > 0.0);
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Config("length atoms must be distinct".into()));
        }
        let mut total: f64 = atoms.iter().map(|a| a.1).sum();
        if let Some((c, m)) = &continuous {
            c.validate()?;
            if !(*m >= 0.0) {
                return Err(Error::Config(format!("continuous mass must be nonnegative, got {m}")));
            }
            total += m;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("length law has total mass {total}, expected 1")));
        }
        let continuous = continuous.filter(|(_, m)| *m > 0.0);
        Ok(Self { atoms, continuous, tail_level: DEFAULT_TAIL_LEVEL })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::shifted_exponential(rate, 0.0)
    }

    /// `shift + Exp(rate)`.
    pub fn shifted_exponential(rate: f64, shift: f64) -> Result<Self> {
        Self::new(vec![], Some((ContinuousLength::Exponential { rate, shift }, 1.0)))
    }

    pub fn two_point(t1: f64, t2: f64, p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::Config(format!("two-point weight must lie in [0, 1], got {p1}")));
        }
        Self::new(vec![(t1, p1), (t2, 1.0 - p1)], None)
    }

    pub fn point_mass(t: f64) -> Result<Self> {
        Self::new(vec![(t, 1.0)], None)
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![], Some((ContinuousLength::Uniform { lo, hi }, 1.0)))
    }

    pub fn table(xs: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        Self::new(vec![], Some((ContinuousLength::Table(PiecewiseLinear::new(xs, density)?), 1.0)))
    }

    /// Replaces the relative tail mass dropped by quadrature.
    pub fn with_tail_level(mut self, level: f64) -> Result<Self> {
        if !(level > 0.0 && level < 1e-3) {
            return Err(Error::Config(format!("tail level must lie in (0, 1e-3), got {level}")));
        }
        self.tail_level = level;
        Ok(self)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn continuous(&self) -> Option<&(ContinuousLength, f64)> {
        self.continuous.as_ref()
    }

    pub fn tail_level(&self) -> f64 {
        self.tail_level
    }

    /// Density of the continuous part, including its mass.
    pub fn density(&self, r: f64) -> f64 {
        self.continuous.as_ref().map_or(0.0, |(c, m)| m * c.pdf(r))
    }

    /// `P(τ ≤ t)`.
    pub fn cdf(&self, t: f64) -> f64 {
        let a: f64 = self.atoms.iter().filter(|x| x.0 <= t).map(|x| x.1).sum();
        a + self.continuous.as_ref().map_or(0.0, |(c, m)| m * c.cdf(t))
    }

    /// `P(τ > t)`, computed without cancellation.
    pub fn survival(&self, t: f64) -> f64 {
        let a: f64 = self.atoms.iter().filter(|x| x.0 > t).map(|x| x.1).sum();
        a + self.continuous.as_ref().map_or(0.0, |(c, m)| m * c.survival(t))
    }

    /// Whether `P(τ ≤ t) = 0`.
    pub fn no_mass_up_to(&self, t: f64) -> bool {
        self.atoms.iter().all(|x| x.0 > t) && self.continuous.as_ref().is_none_or(|(c, _)| c.lo() >= t)
    }

    /// Largest `ε` with `P(τ < ε) = 0`.
    pub fn lower_bound(&self) -> f64 {
        let a = self.atoms.first().map_or(f64::INFINITY, |x| x.0);
        let c = self.continuous.as_ref().map_or(f64::INFINITY, |(c, _)| c.lo());
        a.min(c)
    }

    /// Draws one length using a single uniform variate.
    pub fn sample(&self, rng: &mut SourceRng) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for &(t, w) in &self.atoms {
            acc += w;
            if u < acc {
                return t;
            }
        }
        match &self.continuous {
            Some((c, m)) => c.sample(((u - acc) / m).clamp(0.0, 1.0 - f64::EPSILON)),
            None => self.atoms[self.atoms.len() - 1].0,
        }
    }

    /// Upper end of the continuous quadrature range for integrals above `a`.
    pub fn cutoff_above(&self, a: f64) -> f64 {
        match &self.continuous {
            None => a,
            Some((c, _)) => {
                if c.hi().is_finite() {
                    c.hi()
                } else {
                    let s = c.survival(a.max(c.lo()));
                    c.survival_quantile(self.tail_level * s)
                }
            }
        }
    }

    /// Log-substitution panels covering the continuous part of `(a, b]`,
    /// skipping offsets below `min_offset`. Returns `None` if empty.
    fn log_panels(&self, a: f64, b: f64, min_offset: f64, extra: &[f64], width: f64) -> Option<Vec<f64>> {
        let (c, _) = self.continuous.as_ref()?;
        let lo = a.max(c.lo());
        let hi = b.min(self.cutoff_above(a));
        let off_lo = (lo - a).max(min_offset).max(MIN_OFFSET);
        let off_hi = hi - a;
        if !(off_hi > off_lo) {
            return None;
        }
        let w_lo = 0.5 * off_lo.ln();
        let w_hi = 0.5 * off_hi.ln();
        let mut br = vec![w_lo, w_hi];
        for &k in c.knots().iter().chain(extra) {
            let off = k - a;
            if off > off_lo && off < off_hi {
                br.push(0.5 * off.ln());
            }
        }
        br.sort_by(f64::total_cmp);
        br.dedup();
        let mut out = Vec::with_capacity(br.len() + 8);
        for w in br.windows(2) {
            let n = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
            for j in 0..n {
                out.push(w[0] + (w[1] - w[0]) * j as f64 / n as f64);
            }
        }
        out.push(w_hi);
        Some(out)
    }

    /// `∫_(a,b] h(r) P_τ(dr)` for a vector integrand. The integrand receives
    /// `(r, r - a)` with the offset computed exactly. The continuous part is
    /// integrated in `w = ½ ln(r - a)`, which resolves `(r - a)^(-1/2)`
    /// singularities and features at any scale above `min_offset`; the
    /// integrand must be negligible for offsets below `min_offset`.
    /// `breaks` are extra points where `h` is not smooth.
    pub fn integrate_range<const N: usize, F>(
        &self,
        a: f64,
        b: f64,
        min_offset: f64,
        breaks: &[f64],
        mut h: F,
        opts: &QuadOptions,
    ) -> Result<VecIntegral<N>>
    where
        F: FnMut(f64, f64) -> [f64; N],
    {
        let mut out = VecIntegral::<N>::zero();
        for &(t, w) in &self.atoms {
            if t > a && t <= b {
                let v = h(t, t - a);
                for k in 0..N {
                    out.value[k] += w * v[k];
                    out.resabs[k] += w * v[k].abs();
                }
            }
        }
        if let Some(panels) = self.log_panels(a, b, min_offset, breaks, PANEL_WIDTH) {
            let (cont, m) = self.continuous.as_ref().expect("panels imply a continuous part");
            let integrand = |w: f64| {
                let off = (2.0 * w).exp();
                let r = a + off;
                let d = m * cont.pdf(r) * 2.0 * off;
                if d == 0.0 {
                    return [0.0; N];
                }
                let v = h(r, off);
                std::array::from_fn(|k| v[k] * d)
            };
            let (res, _) = adaptive_partition(integrand, &panels, opts)?;
            out.add(&res);
        }
        Ok(out)
    }

    /// `∫_(a,∞) h(r) P_τ(dr)` for a scalar integrand of `r`.
    pub fn integrate_tail<F: FnMut(f64) -> f64>(&self, a: f64, mut h: F) -> Result<Integral> {
        self.integrate_range(a, f64::INFINITY, 0.0, &[], |r, _| [h(r)], &QuadOptions::default()).map(|r| r.component(0))
    }

    /// Discretizes `P_τ` restricted to `(a, b]` into weighted nodes. The node
    /// placement is chosen adaptively so that `∫ guide(r) P_τ(dr)` is
    /// resolved to the requested tolerance.
    /// Fixed rule for `∫_(a,b] h(r) P(dr)`: the atoms plus the nodes of
    /// `rule` (a rule on `[-1, 1]`) on panels of `panel_width` in the variable
    /// `w = ½ ln(r - a)`. Cheaper than [`Self::integrate_range`] when the
    /// integrand is known to be smooth in `w` at that resolution.
    pub fn log_rule(
        &self,
        a: f64,
        b: f64,
        min_offset: f64,
        breaks: &[f64],
        panel_width: f64,
        rule: &[(f64, f64)],
    ) -> Vec<LengthNode> {
        let mut out: Vec<LengthNode> = self
            .atoms
            .iter()
            .filter(|(t, _)| *t > a && *t <= b)
            .map(|&(t, w)| LengthNode { length: t, offset: t - a, weight: w })
            .collect();
        if let Some(panels) = self.log_panels(a, b, min_offset, breaks, panel_width) {
            let (cont, m) = self.continuous.as_ref().expect("panels imply a continuous part");
            for p in panels.windows(2) {
                let (mid, half) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
                for (x, q) in rule {
                    let w = mid + half * x;
                    let off = (2.0 * w).exp();
                    let r = a + off;
                    let weight = m * cont.pdf(r) * 2.0 * off * q * half;
                    if weight > 0.0 {
                        out.push(LengthNode { length: r, offset: off, weight });
                    }
                }
            }
        }
        out
    }

    pub fn nodes<F>(
        &self,
        a: f64,
        b: f64,
        min_offset: f64,
        breaks: &[f64],
        mut guide: F,
        opts: &QuadOptions,
    ) -> Result<Vec<LengthNode>>
    where
        F: FnMut(f64, f64) -> f64,
    {
        let mut out: Vec<LengthNode> = self
            .atoms
            .iter()
            .filter(|(t, _)| *t > a && *t <= b)
            .map(|&(t, w)| LengthNode { length: t, offset: t - a, weight: w })
            .collect();
        if let Some(panels) = self.log_panels(a, b, min_offset, breaks, PANEL_WIDTH) {
            let (cont, m) = self.continuous.as_ref().expect("panels imply a continuous part");
            let integrand = |w: f64| {
                let off = (2.0 * w).exp();
                let r = a + off;
                let d = m * cont.pdf(r) * 2.0 * off;
                if d == 0.0 {
                    [0.0]
                } else {
                    [guide(r, off) * d]
                }
            };
            let (_, parts) = adaptive_partition(integrand, &panels, opts)?;
            for (wa, wb) in parts {
                for (w, q) in kronrod_nodes(wa, wb) {
                    let off = (2.0 * w).exp();
                    let r = a + off;
                    let weight = m * cont.pdf(r) * 2.0 * off * q;
                    if weight > 0.0 {
                        out.push(LengthNode { length: r, offset: off, weight });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_cdf_and_tail() {
        let law = LengthLaw::exponential(0.1).unwrap();
        assert!((law.cdf(10.0) - 0.632_120_558_8).abs() < 1e-10);
        assert_eq!(law.cdf(0.0), 0.0);
        let t = law.integrate_tail(3.0, |_| 1.0).unwrap();
        assert!((t.value - (-0.3f64).exp()).abs() < 1e-8);
        let m = law.integrate_tail(0.0, |r| r).unwrap();
        assert!((m.value - 10.0).abs() < 1e-6, "{}", m.value);
    }

    #[test]
    fn two_point_and_point_mass() {
        let law = LengthLaw::two_point(1.0, 2.0, 0.5).unwrap();
        assert_eq!(law.cdf(1.5), 0.5);
        let pm = LengthLaw::point_mass(3.0).unwrap();
        let v = pm.integrate_tail(1.0, |r| r * r).unwrap();
        assert_eq!(v.value, 9.0);
        assert!(pm.no_mass_up_to(2.9));
        assert!(!pm.no_mass_up_to(3.0));
    }

    #[test]
    fn rejects_invalid_laws() {
        assert!(LengthLaw::exponential(0.0).is_err());
        assert!(LengthLaw::point_mass(0.0).is_err());
        assert!(LengthLaw::new(vec![(1.0, 0.4)], None).is_err());
        assert!(LengthLaw::uniform(2.0, 1.0).is_err());
    }

    #[test]
    fn nodes_reproduce_integrals() {
        let law =
            LengthLaw::new(vec![(0.7, 0.25)], Some((ContinuousLength::Exponential { rate: 0.5, shift: 0.0 }, 0.75)))
                .unwrap();
        let nodes = law.nodes(0.2, 4.0, 0.0, &[], |r, _| (-r).exp(), &QuadOptions::default()).unwrap();
        let s: f64 = nodes.iter().map(|n| n.weight * (-n.length).exp()).sum();
        let want = law.integrate_range(0.2, 4.0, 0.0, &[], |r, _| [(-r).exp()], &QuadOptions::default()).unwrap();
        assert!((s - want.value[0]).abs() < 1e-10);
        let mass: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((mass - (law.cdf(4.0) - law.cdf(0.2))).abs() < 1e-9);
    }
}
