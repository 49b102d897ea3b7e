//! Posterior and predictive laws checked against closed forms, independent
//! quadrature, and Monte-Carlo conditioning on narrow bins.

use distributions::quadrature::{integrate, QuadOptions};
use distributions::{LengthLaw, PinLaw};
use gaussian_core::{gauss_pdf, Error, PathRng};
use random_bridge::*;

fn fig2_model() -> RandomBridgeModel {
    RandomBridgeModel::new(
        LengthLaw::exponential(0.1).unwrap(),
        PinLaw::discrete(vec![-4.0, 4.0], vec![0.3, 0.7]).unwrap(),
    )
}

fn normal_pin_model() -> RandomBridgeModel {
    RandomBridgeModel::new(LengthLaw::exponential(0.1).unwrap(), PinLaw::standard_normal())
}

/// Binned Monte-Carlo estimate of `E[target | ζ_t ∈ (x ± eps)]` with its
/// standard error.
fn binned_mc(
    model: &RandomBridgeModel,
    times: &[f64],
    bins: &[(usize, f64, f64)],
    n: usize,
    seed: u64,
    target: impl Fn(&[f64], f64, f64) -> f64,
) -> (f64, f64, usize) {
    let mut rng = PathRng::new(seed, 0);
    let mut out = vec![0.0; times.len()];
    let (mut k, mut s, mut s2) = (0usize, 0.0, 0.0);
    for _ in 0..n {
        let h = model.sample_into(times, &mut rng, &mut out);
        if bins.iter().all(|&(i, c, e)| (out[i] - c).abs() < e) {
            let v = target(&out, h.length, h.pin);
            k += 1;
            s += v;
            s2 += v * v;
        }
    }
    let m = s / k as f64;
    (m, ((s2 / k as f64 - m * m) / k as f64).sqrt(), k)
}

#[test]
fn absorbed_observation_is_certain() {
    let post = posterior_tau_z(&fig2_model(), 10.0, 4.0).unwrap();
    assert!(post.absorbed());
    assert!((post.prob_length_at_most(10.0) - 1.0).abs() < 1e-12);
    assert!(post.nodes().iter().all(|n| n.pin == 4.0));
}

#[test]
fn near_pin_value_is_not_absorption() {
    let x = 4.0 + 8.0 * f64::EPSILON;
    let post = posterior_tau_z(&fig2_model(), 10.0, x).unwrap();
    assert!(!post.absorbed());
    assert_eq!(post.prob_length_at_most(10.0), 0.0);
}

#[test]
fn posteriors_normalize() {
    for (m, x) in [(fig2_model(), 0.3), (fig2_model(), -4.0), (normal_pin_model(), 1.1)] {
        let post = posterior_tau_z(&m, 3.0, x).unwrap();
        assert!((post.total_weight() - 1.0).abs() < 1e-10);
        assert!((post.expect(|_, _| 1.0) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn rejects_nonpositive_time() {
    assert!(matches!(posterior_tau_z(&fig2_model(), 0.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn absorbed_pin_without_length_mass_is_inconsistent() {
    let m = RandomBridgeModel::new(
        LengthLaw::point_mass(5.0).unwrap(),
        PinLaw::discrete(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap(),
    );
    assert!(matches!(posterior_tau_z(&m, 2.0, 1.0), Err(Error::Inference(_))));
}

/// For a standard normal pin, integrating the bridge marginal over `z` gives
/// `p(t(r-t)/r + t²/r², x)`, a closed form independent of the table.
#[test]
fn continuous_pin_absorption_probability_matches_closed_form() {
    let model = normal_pin_model();
    for (t, x) in [(2.0, 0.7), (10.0, -1.3), (25.0, 0.1), (0.5, 2.5)] {
        let lam: f64 = 0.1;
        let ft = 1.0 - (-lam * t).exp();
        let fx = gauss_pdf(1.0, x, 0.0).unwrap();
        let h = |r: f64| gauss_pdf(t * (r - t) / r + t * t / (r * r), x, 0.0).unwrap() * lam * (-lam * r).exp();
        let breaks: Vec<f64> = [0.0, 0.1, 1.0, 5.0, 20.0, 60.0, 150.0, 400.0].iter().map(|d| t + d).collect();
        let tail = integrate(h, &breaks, &QuadOptions::default()).unwrap().value;
        let want = fx * ft / (fx * ft + tail);
        let got = posterior_tau_z(&model, t, x).unwrap().prob_length_at_most(t);
        assert!(got > 0.0 && got < 1.0);
        assert!((got - want).abs() < 1e-8, "t={t} x={x}: {got} vs {want}");
    }
}

#[test]
fn discrete_posterior_pin_mean_matches_mc() {
    let model = RandomBridgeModel::new(LengthLaw::exponential(0.1).unwrap(), PinLaw::binomial(3, 0.5).unwrap());
    let (t, x, eps) = (5.0, 1.3, 0.03);
    let want = posterior_tau_z(&model, t, x).unwrap().expect(|_, z| z);
    let (m, se, k) = binned_mc(&model, &[0.0, t], &[(1, x, eps)], 1_000_000, 21, |_, _, z| z);
    assert!(k > 500);
    assert!((m - want).abs() < 3.0 * se, "mc {m} ± {se} vs {want}");
}

#[test]
fn predictive_normalizes_and_is_symmetric() {
    let sym = RandomBridgeModel::new(
        LengthLaw::exponential(0.2).unwrap(),
        PinLaw::discrete(vec![-4.0, 4.0], vec![0.5, 0.5]).unwrap(),
    );
    let one = predict_future(&fig2_model(), 2.0, 0.4, 3.5, &Observable::Constant(1.0)).unwrap();
    assert!((one - 1.0).abs() < 1e-8);
    let one = predict_future(&normal_pin_model(), 2.0, 0.4, 3.5, &Observable::Constant(1.0)).unwrap();
    assert!((one - 1.0).abs() < 1e-8);
    let m = predict_future(&sym, 3.0, 0.0, 5.0, &Observable::Value).unwrap();
    assert!(m.abs() < 1e-10, "{m}");
}

#[test]
fn predictive_mean_matches_mc_for_two_point_length() {
    let model = RandomBridgeModel::new(LengthLaw::two_point(1.0, 2.0, 0.5).unwrap(), PinLaw::standard_normal());
    let (t, x, u, eps) = (1.5, 0.3, 2.5, 0.02);
    let want = predict_future(&model, t, x, u, &Observable::Value).unwrap();
    let (m, se, _) = binned_mc(&model, &[0.0, t, u], &[(1, x, eps)], 1_000_000, 22, |v, _, _| v[2]);
    assert!((m - want).abs() < 3.0 * se, "mc {m} ± {se} vs {want}");
}

#[test]
fn predictive_converges_as_horizon_shrinks() {
    let model = fig2_model();
    let g = Observable::Logistic { center: 0.5, scale: 0.7 };
    let (t, x) = (3.0, 0.8);
    let limit = 1.0 / (1.0 + (-(x - 0.5) / 0.7f64).exp());
    let mut prev = f64::INFINITY;
    for d in [1e-1, 1e-2, 1e-3, 1e-4] {
        let v = predict_future(&model, t, x, t + d, &g).unwrap();
        let err = (v - limit).abs();
        assert!(err <= prev + 1e-12);
        prev = err;
    }
    assert!(prev < 1e-3, "{prev}");
}

#[test]
fn two_time_normalizes_and_degenerates() {
    let model = RandomBridgeModel::new(LengthLaw::two_point(1.0, 2.0, 0.5).unwrap(), PinLaw::standard_normal());
    let one = two_time_conditional(&model, 0.5, 1.5, 2.5, 0.8, 0.3, &Observable::Constant(1.0)).unwrap();
    assert!((one - 1.0).abs() < 1e-8);

    let pm = RandomBridgeModel::new(LengthLaw::point_mass(4.0).unwrap(), PinLaw::standard_normal());
    let g = Observable::Above(0.0);
    let a = two_time_conditional(&pm, 0.5, 1.5, 2.5, 0.8, 0.3, &g).unwrap();
    let b = predict_future(&pm, 1.5, 0.3, 2.5, &g).unwrap();
    assert!((a - b).abs() < 1e-8);
    let gap = markov_gap(&pm, 0.5, 1.5, 2.5, -1.0, 0.3, &g).unwrap();
    assert!(gap.gap < 1e-8);
}

#[test]
fn two_time_preconditions() {
    let atoms_early = RandomBridgeModel::new(LengthLaw::two_point(0.4, 2.0, 0.5).unwrap(), PinLaw::standard_normal());
    let g = Observable::Above(0.0);
    assert!(matches!(two_time_conditional(&atoms_early, 0.5, 1.5, 2.5, 0.0, 0.0, &g), Err(Error::Precondition(_))));
    assert!(matches!(two_time_conditional(&fig2_model(), 0.5, 1.5, 2.5, 0.0, 0.0, &g), Err(Error::Precondition(_))));
    assert!(matches!(
        non_markov_gap(&PinLaw::standard_normal(), (1.0, 2.0), 0.5, 2.5, 1.5, 0.0, 0.0, &g),
        Err(Error::Precondition(_))
    ));
}

/// Reference values computed offline with adaptive quadrature in `z` at the
/// two atoms of the length law.
#[test]
fn non_markov_gap_matches_reference_quadrature() {
    let g = Observable::Above(0.0);
    let pin = PinLaw::standard_normal();
    let r = non_markov_gap(&pin, (1.0, 2.0), 0.5, 1.5, 2.5, 0.8, 0.3, &g).unwrap();
    assert!((r.lhs - 0.824_318_404_435_514_9).abs() < 1e-8, "{}", r.lhs);
    assert!((r.rhs - 0.821_339_154_829_112_4).abs() < 1e-8, "{}", r.rhs);
    assert!(r.gap > 1e-3);
    let r = non_markov_gap(&pin, (1.0, 2.0), 0.5, 1.5, 2.5, -1.0, 0.3, &g).unwrap();
    assert!((r.lhs - 0.763_484_012_804_415_8).abs() < 1e-8, "{}", r.lhs);
}

#[test]
fn sampled_paths_respect_model() {
    let model = fig2_model();
    let sym = RandomBridgeModel::new(
        LengthLaw::exponential(0.1).unwrap(),
        PinLaw::discrete(vec![-4.0, 4.0], vec![0.5, 0.5]).unwrap(),
    );
    let times = [0.0, 10.0];
    let n = 100_000;
    let mut out = [0.0; 2];
    let mut rng = PathRng::new(31, 0);
    let mut hits = 0;
    for _ in 0..n {
        let h = model.sample_into(&times, &mut rng, &mut out);
        assert_eq!(out[0], 0.0);
        if out[1] == h.pin {
            hits += 1;
        }
    }
    let f = 1.0 - (-1.0f64).exp();
    let se = (f * (1.0 - f) / n as f64).sqrt();
    assert!((hits as f64 / n as f64 - f).abs() < 3.0 * se);

    let mut rng = PathRng::new(32, 0);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        sym.sample_into(&[0.0, 6.0], &mut rng, &mut out);
        s += out[1];
        s2 += out[1] * out[1];
    }
    let m = s / n as f64;
    let sd = (s2 / n as f64 - m * m).sqrt();
    assert!(m.abs() < 3.0 * sd / (n as f64).sqrt());
}
