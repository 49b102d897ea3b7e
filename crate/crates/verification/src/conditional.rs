use crate::stats::MeanAcc;
use gaussian_core::{Error, PathRng, Result};
use random_bridge::RandomBridgeModel;
use rayon::prelude::*;

/// Number of nested bin widths `ε, ε/2, ε/4, ε/8` tracked per query.
pub const LEVELS: usize = 4;
/// Paths per random-stream block; fixes the result independently of threads.
pub const CHUNK: usize = 4096;
/// Smallest accepted path count.
pub const MIN_PATHS: usize = 10_000;

/// Condition on the path value at one time. Bins look at the value only, as
/// the conditioning on `ζ_t` does: with a continuous pin an absorbed path
/// is indistinguishable from a live one. A window containing a discrete pin
/// also catches the paths absorbed there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bin {
    /// `|ξ_t - center| ≤ ε`. The width is narrowed while the estimate still
    /// moves with it.
    Near { center: f64, eps: f64 },
    /// `lo ≤ ξ_t < hi`.
    Range { lo: f64, hi: f64 },
    /// `ξ_t` equal to the value bit for bit.
    Exactly(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningSpec {
    pub times: Vec<f64>,
    pub bins: Vec<Bin>,
    pub min_samples: usize,
}

impl ConditioningSpec {
    pub fn new(times: Vec<f64>, bins: Vec<Bin>) -> Result<Self> {
        if times.len() != bins.len() {
            return Err(Error::Input(format!("{} times but {} bins", times.len(), bins.len())));
        }
        for (&t, b) in times.iter().zip(&bins) {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Input(format!("conditioning time must be positive, got {t}")));
            }
            match *b {
                Bin::Near { eps, .. } if !(eps > 0.0) => {
                    return Err(Error::Input(format!("bin half-width must be positive, got {eps}")))
                }
                Bin::Range { lo, hi } if !(hi > lo) => return Err(Error::Input(format!("empty range [{lo}, {hi})"))),
                _ => {}
            }
        }
        Ok(Self { times, bins, min_samples: 500 })
    }

    pub fn unconditional() -> Self {
        Self { times: Vec::new(), bins: Vec::new(), min_samples: 500 }
    }

    pub fn with_min_samples(mut self, n: usize) -> Result<Self> {
        if n < 100 {
            return Err(Error::Input(format!("min_samples must be at least 100, got {n}")));
        }
        self.min_samples = n;
        Ok(self)
    }

    fn adaptive(&self) -> bool {
        self.bins.iter().any(|b| matches!(b, Bin::Near { .. }))
    }
}

/// One simulated path as seen by a target.
#[derive(Debug, Clone, Copy)]
pub struct Draw<'a> {
    pub times: &'a [f64],
    pub values: &'a [f64],
    pub absorb_index: Option<usize>,
    pub length: f64,
    pub pin: f64,
}

impl Draw<'_> {
    fn index(&self, t: f64) -> usize {
        self.times.iter().position(|&s| s == t).expect("target time was registered with the simulation")
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.values[self.index(t)]
    }

    pub fn absorbed_at(&self, t: f64) -> bool {
        self.absorb_index.is_some_and(|k| self.index(t) >= k)
    }
}

pub type Target<'a> = &'a (dyn Fn(&Draw) -> f64 + Sync);

pub struct Query<'a> {
    pub spec: ConditioningSpec,
    pub target: Target<'a>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    /// Factor applied to every `Near` half-width.
    pub eps_factor: f64,
    /// Standardized change of the estimate when the bins are halved once
    /// more; `NaN` when not measurable.
    pub bias_z: f64,
}

struct Compiled {
    bins: Vec<(usize, Bin)>,
    levels: usize,
}

/// Deepest level whose bins all contain the path, or `None`.
fn match_level(c: &Compiled, d: &Draw) -> Option<usize> {
    let mut level = c.levels - 1;
    for &(k, bin) in &c.bins {
        let v = d.values[k];
        match bin {
            Bin::Near { center, eps } => {
                let dist = (v - center).abs();
                if dist > eps {
                    return None;
                }
                let mut l = 0;
                while l < level && dist <= eps * 0.5f64.powi(l as i32 + 1) {
                    l += 1;
                }
                level = level.min(l);
            }
            Bin::Range { lo, hi } => {
                if !(v >= lo && v < hi) {
                    return None;
                }
            }
            Bin::Exactly(x) => {
                if v != x {
                    return None;
                }
            }
        }
    }
    Some(level)
}

fn select(accs: &[MeanAcc; LEVELS], levels: usize, min_samples: usize, total: usize) -> Result<McEstimate> {
    if (accs[0].n as usize) < min_samples {
        return Err(Error::Statistical(format!(
            "only {} of {total} paths matched the conditioning (need {min_samples}); increase the path count or the bin width",
            accs[0].n
        )));
    }
    let bias = |j: usize| {
        let (o, i) = (&accs[j], &accs[j + 1]);
        let var = i.stderr().powi(2) - o.stderr().powi(2);
        if i.n < 2 || !(var > 0.0) {
            return f64::NAN;
        }
        (o.mean() - i.mean()) / var.sqrt()
    };
    let mut j = 0;
    while j + 1 < levels && (accs[j + 1].n as usize) >= min_samples && bias(j).abs() > 2.0 {
        j += 1;
    }
    let bias_z = if j + 1 < levels { bias(j) } else { f64::NAN };
    Ok(McEstimate {
        estimate: accs[j].mean(),
        stderr: accs[j].stderr(),
        samples: accs[j].n,
        eps_factor: 0.5f64.powi(j as i32),
        bias_z,
    })
}

/// Estimates `E[target | spec]` for several queries from one set of exact
/// paths. Each query's `Near` bins start at their given width and are
/// halved while halving changes the estimate by more than two standard
/// errors of the change and enough paths remain.
pub fn mc_conditional_many(
    model: &RandomBridgeModel,
    target_times: &[f64],
    queries: &[Query],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Result<McEstimate>>> {
    if n_paths < MIN_PATHS {
        return Err(Error::Precondition(format!("need at least {MIN_PATHS} paths, got {n_paths}")));
    }
    let mut times: Vec<f64> = target_times.to_vec();
    for q in queries {
        times.extend(&q.spec.times);
    }
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::Input("simulation times must be finite and non-negative".into()));
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    let compiled: Vec<Compiled> = queries
        .iter()
        .map(|q| Compiled {
            bins: q
                .spec
                .times
                .iter()
                .zip(&q.spec.bins)
                .map(|(t, b)| (times.iter().position(|s| s == t).expect("registered"), *b))
                .collect(),
            levels: if q.spec.adaptive() { LEVELS } else { 1 },
        })
        .collect();
    let n_chunks = n_paths.div_ceil(CHUNK);
    let parts: Vec<Vec<[MeanAcc; LEVELS]>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = PathRng::new(seed, c as u64);
            let mut values = vec![0.0; times.len()];
            let mut accs = vec![[MeanAcc::default(); LEVELS]; queries.len()];
            let count = CHUNK.min(n_paths - c * CHUNK);
            for _ in 0..count {
                let s = model.sample_into(&times, &mut rng, &mut values);
                let d =
                    Draw { times: &times, values: &values, absorb_index: s.absorb_index, length: s.length, pin: s.pin };
                for (qi, c) in compiled.iter().enumerate() {
                    if let Some(level) = match_level(c, &d) {
                        let v = (queries[qi].target)(&d);
                        for acc in &mut accs[qi][..=level] {
                            acc.push(v);
                        }
                    }
                }
            }
            accs
        })
        .collect();
    let mut total = vec![[MeanAcc::default(); LEVELS]; queries.len()];
    for part in &parts {
        for (t, p) in total.iter_mut().zip(part) {
            for l in 0..LEVELS {
                t[l].merge(&p[l]);
            }
        }
    }
    Ok(total
        .iter()
        .zip(queries.iter().zip(&compiled))
        .map(|(accs, (q, c))| select(accs, c.levels, q.spec.min_samples, n_paths))
        .collect())
}

/// Single-query form of [`mc_conditional_many`].
pub fn mc_conditional(
    model: &RandomBridgeModel,
    spec: &ConditioningSpec,
    target_times: &[f64],
    target: Target,
    n_paths: usize,
    seed: u64,
) -> Result<McEstimate> {
    let q = [Query { spec: spec.clone(), target }];
    mc_conditional_many(model, target_times, &q, n_paths, seed)?.pop().expect("one query")
}
