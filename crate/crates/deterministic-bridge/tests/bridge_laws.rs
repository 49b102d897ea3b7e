//! Monte-Carlo and quadrature checks of the bridge laws against independent
//! oracles (sample moments, Simpson's rule).

use deterministic_bridge::*;
use gaussian_core::rng_stream;
use proptest::prelude::*;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn midpoint_variance_matches_closed_form() {
    let spec = BridgeSpec::new(1.0, 0.0).unwrap();
    let times = [0.0, 0.5, 1.0];
    let mut rng = rng_stream(10, 0);
    let mut out = [0.0; 3];
    let n = 100_000;
    let mut s2 = 0.0;
    for _ in 0..n {
        sample_bridge_into(spec.length(), spec.pin(), &times, &mut rng, &mut out);
        s2 += out[1] * out[1];
    }
    let var = s2 / n as f64;
    let tol = 3.0 * (2.0 * 0.25f64.powi(2) / n as f64).sqrt();
    assert!((var - 0.25).abs() < tol, "var {var}");
}

#[test]
fn covariance_matches_closed_form() {
    let (r, z) = (2.0, 1.0);
    let times = [0.0, 0.6, 1.4];
    let mut rng = rng_stream(10, 1);
    let mut out = [0.0; 3];
    let n = 100_000;
    let (mut a, mut b, mut ab) = (0.0, 0.0, 0.0);
    let mut prods = Vec::with_capacity(n);
    for _ in 0..n {
        sample_bridge_into(r, z, &times, &mut rng, &mut out);
        a += out[1];
        b += out[2];
        ab += out[1] * out[2];
        prods.push((out[1], out[2]));
    }
    let nf = n as f64;
    let (ma, mb) = (a / nf, b / nf);
    let cov = ab / nf - ma * mb;
    let terms: Vec<f64> = prods.iter().map(|(x, y)| (x - ma) * (y - mb)).collect();
    let sd = (terms.iter().map(|t| (t - cov).powi(2)).sum::<f64>() / nf).sqrt();
    let want = 0.6 * (r - 1.4) / r;
    assert!((cov - want).abs() < 3.0 * sd / nf.sqrt(), "cov {cov} want {want}");
}

#[test]
fn joint_density_matches_box_estimate() {
    let spec = BridgeSpec::new(1.0, 0.0).unwrap();
    let times = [0.0, 0.3, 0.6];
    let (x1, x2, h) = (0.1, -0.2, 0.05);
    let mut rng = rng_stream(10, 2);
    let mut out = [0.0; 3];
    let n = 1_000_000;
    let mut hits = 0usize;
    for _ in 0..n {
        sample_bridge_into(1.0, 0.0, &times, &mut rng, &mut out);
        if (out[1] - x1).abs() < h && (out[2] - x2).abs() < h {
            hits += 1;
        }
    }
    let area = 4.0 * h * h;
    let p = hits as f64 / n as f64;
    let est = p / area;
    let se = (p * (1.0 - p) / n as f64).sqrt() / area;
    let want = bridge_fdd_pdf(&spec, &[0.3, 0.6], &[x1, x2]).unwrap();
    assert!((est - want).abs() < 3.0 * se, "est {est} want {want} se {se}");
}

#[test]
fn marginal_and_transition_normalize() {
    let spec = BridgeSpec::new(2.0, -1.0).unwrap();
    let m = simpson(|x| bridge_marginal_pdf(&spec, 0.5, x).unwrap(), -8.0, 8.0, 4000);
    assert!((m - 1.0).abs() < 1e-8);
    let s1 = BridgeSpec::new(1.0, 0.0).unwrap();
    let t = simpson(|y| bridge_transition_pdf(&s1, 0.25, 0.1, 0.5, y).unwrap(), -8.0, 8.0, 4000);
    assert!((t - 1.0).abs() < 1e-8);
}

#[test]
fn transition_mean() {
    let spec = BridgeSpec::new(1.0, 2.0).unwrap();
    let m = simpson(|y| y * bridge_transition_pdf(&spec, 0.5, 0.0, 0.75, y).unwrap(), -8.0, 10.0, 6000);
    assert!((m - 1.0).abs() < 1e-6);
}

#[test]
fn chapman_kolmogorov() {
    let spec = BridgeSpec::new(3.0, 1.5).unwrap();
    let (t, s, u, x, y) = (0.4, 1.1, 2.2, -0.3, 0.9);
    let composed = simpson(
        |w| bridge_transition_pdf(&spec, t, x, s, w).unwrap() * bridge_transition_pdf(&spec, s, w, u, y).unwrap(),
        -12.0,
        12.0,
        8000,
    );
    let direct = bridge_transition_pdf(&spec, t, x, u, y).unwrap();
    assert!((composed - direct).abs() < 1e-6);
}

#[test]
fn drift_matches_finite_difference() {
    let (r, z, s, x, d, eps) = (1.0, 0.0, 0.5, 0.4, 1e-3, 0.02);
    let times = [0.0, s, s + d];
    let mut rng = rng_stream(10, 3);
    let mut out = [0.0; 3];
    let (mut n, mut sum, mut sum2) = (0usize, 0.0, 0.0);
    for _ in 0..1_000_000 {
        sample_bridge_into(r, z, &times, &mut rng, &mut out);
        if (out[1] - x).abs() < eps {
            let v = (out[2] - out[1]) / d;
            n += 1;
            sum += v;
            sum2 += v * v;
        }
    }
    let m = sum / n as f64;
    let se = ((sum2 / n as f64 - m * m) / n as f64).sqrt();
    assert!((m - (-0.8)).abs() < 3.0 * se, "fd drift {m} se {se}");
}

proptest! {
    #[test]
    fn transition_forms_agree(r in 0.1f64..20.0, z in -5.0f64..5.0, a in 0.01f64..0.98, b in 0.01f64..0.99,
                              x in -4.0f64..4.0, y in -4.0f64..4.0) {
        let spec = BridgeSpec::new(r, z).unwrap();
        let t = a * r;
        let u = t + b * (r - t);
        prop_assume!(u > t && u < r);
        let p1 = bridge_transition_pdf(&spec, t, x, u, y).unwrap();
        let p2 = bridge_transition_alt_pdf(&spec, t, x, u, y).unwrap();
        prop_assume!(p2 > 1e-250);
        prop_assert!((p1 - p2).abs() <= 1e-12 * p2.max(p1), "{} vs {}", p1, p2);
    }

    #[test]
    fn sampled_paths_hold_pin(r in 0.05f64..5.0, z in -5.0f64..5.0, seed in 0u64..1000) {
        let spec = BridgeSpec::new(r, z).unwrap();
        let grid = TimeGrid::uniform(6.0, 60).unwrap();
        let p = sample_bridge(&spec, &grid, &mut rng_stream(seed, 0));
        let k = p.absorb_index.unwrap();
        prop_assert!(grid.times()[k] >= r && (k == 0 || grid.times()[k - 1] < r));
        prop_assert!(p.values[k..].iter().all(|&v| v == z));
        prop_assert_eq!(p.values[0], 0.0);
    }
}
