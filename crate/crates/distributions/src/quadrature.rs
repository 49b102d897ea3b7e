//! Adaptive Gauss–Kronrod (21 points) for vector-valued integrands, plus
//! Gauss–Legendre rules for fixed-node tables.

use gaussian_core::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances for the adaptive rule. A component converges once its error
/// estimate is below `max(epsabs, epsrel · ∫|f_k|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub epsabs: f64,
    pub epsrel: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { epsabs: 0.0, epsrel: 1e-10, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn with_epsrel(epsrel: f64) -> Self {
        Self { epsrel, ..Self::default() }
    }
}

/// Value and error estimate of a scalar integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abserr: f64,
}

/// Result of a vector integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecIntegral<const N: usize> {
    pub value: [f64; N],
    pub abserr: [f64; N],
    pub resabs: [f64; N],
    pub intervals: usize,
}

impl<const N: usize> VecIntegral<N> {
    pub fn zero() -> Self {
        Self { value: [0.0; N], abserr: [0.0; N], resabs: [0.0; N], intervals: 0 }
    }

    pub fn component(&self, k: usize) -> Integral {
        Integral { value: self.value[k], abserr: self.abserr[k] }
    }

    /// Componentwise sum; used to combine atom and continuous parts.
    pub fn add(&mut self, other: &Self) {
        for k in 0..N {
            self.value[k] += other.value[k];
            self.abserr[k] += other.abserr[k];
            self.resabs[k] += other.resabs[k];
        }
        self.intervals += other.intervals;
    }
}

#[derive(Clone, Copy)]
struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    err: [f64; N],
    resabs: [f64; N],
}

fn gk21<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> Piece<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
    }
    let mut value = [0.0; N];
    let mut err = [0.0; N];
    let mut resabs_out = [0.0; N];
    for k in 0..N {
        let mut resg = 0.0;
        let mut resk = WGK[10] * fc[k];
        let mut resabs = resk.abs();
        for j in 0..5 {
            let jt = 2 * j + 1;
            let s = fv1[jt][k] + fv2[jt][k];
            resg += WG[j] * s;
            resk += WGK[jt] * s;
            resabs += WGK[jt] * (fv1[jt][k].abs() + fv2[jt][k].abs());
        }
        for j in 0..5 {
            let jt = 2 * j;
            resk += WGK[jt] * (fv1[jt][k] + fv2[jt][k]);
            resabs += WGK[jt] * (fv1[jt][k].abs() + fv2[jt][k].abs());
        }
        let reskh = 0.5 * resk;
        let mut resasc = WGK[10] * (fc[k] - reskh).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv1[j][k] - reskh).abs() + (fv2[j][k] - reskh).abs());
        }
        let hh = h.abs();
        resabs *= hh;
        resasc *= hh;
        let mut e = ((resk - resg) * h).abs();
        if resasc != 0.0 && e != 0.0 {
            e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(50.0 * f64::EPSILON * resabs);
        }
        value[k] = resk * h;
        err[k] = e;
        resabs_out[k] = resabs;
    }
    Piece { a, b, value, err, resabs: resabs_out }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the
/// partition given by `breaks` (sorted, at least two entries).
pub fn integrate_vec<const N: usize, F>(f: F, breaks: &[f64], opts: &QuadOptions) -> Result<VecIntegral<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    adaptive_partition(f, breaks, opts).map(|(r, _)| r)
}

/// Like [`integrate_vec`] but also returns the final partition.
pub fn adaptive_partition<const N: usize, F>(
    mut f: F,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<(VecIntegral<N>, Vec<(f64, f64)>)>
where
    F: FnMut(f64) -> [f64; N],
{
    if breaks.len() < 2 {
        return Ok((VecIntegral::zero(), Vec::new()));
    }
    let mut pieces: Vec<Piece<N>> = Vec::with_capacity(breaks.len() + 16);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            pieces.push(gk21(&mut f, w[0], w[1]));
        }
    }
    let mut frozen = vec![false; pieces.len()];
    loop {
        let mut total = [0.0; N];
        let mut err = [0.0; N];
        let mut absv = [0.0; N];
        for p in &pieces {
            for k in 0..N {
                total[k] += p.value[k];
                err[k] += p.err[k];
                absv[k] += p.resabs[k];
            }
        }
        let tol: [f64; N] = std::array::from_fn(|k| opts.epsabs.max(opts.epsrel * absv[k]).max(f64::MIN_POSITIVE));
        if (0..N).all(|k| err[k] <= tol[k]) {
            let parts = pieces.iter().map(|p| (p.a, p.b)).collect();
            return Ok((VecIntegral { value: total, abserr: err, resabs: absv, intervals: pieces.len() }, parts));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(i, _)| !frozen[*i])
            .map(|(i, p)| (i, (0..N).map(|k| p.err[k] / tol[k]).fold(0.0, f64::max)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((i, _)) = worst else {
            return Err(non_convergence(&total, &err, &tol, pieces.len(), "all intervals at resolution limit"));
        };
        if pieces.len() >= opts.max_intervals {
            return Err(non_convergence(&total, &err, &tol, pieces.len(), "interval limit reached"));
        }
        let p = pieces[i];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 1e-13 * p.a.abs().max(p.b.abs()).max(1e-300) {
            frozen[i] = true;
            continue;
        }
        pieces[i] = gk21(&mut f, p.a, mid);
        pieces.push(gk21(&mut f, mid, p.b));
        frozen.push(false);
    }
}

fn non_convergence<const N: usize>(total: &[f64; N], err: &[f64; N], tol: &[f64; N], n: usize, why: &str) -> Error {
    Error::Numeric {
        message: format!("adaptive quadrature did not converge: {why}"),
        diagnostics: format!("value={total:?} abserr={err:?} tolerance={tol:?} intervals={n}"),
    }
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], opts: &QuadOptions) -> Result<Integral> {
    let r = integrate_vec(|x| [f(x)], breaks, opts)?;
    Ok(r.component(0))
}

/// The 21 Kronrod nodes and weights on `[a, b]`.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 21] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(c, WGK[10] * h); 21];
    for j in 0..10 {
        out[2 * j] = (c - h * XGK[j], WGK[j] * h);
        out[2 * j + 1] = (c + h * XGK[j], WGK[j] * h);
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = x;
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Composite Gauss–Legendre rule on `[a, b]`: `panels` equal panels of
/// `order` nodes each.
pub fn composite_legendre(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in xs.iter().zip(&ws) {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}
