use distributions::LengthLaw;
use info_process::*;
use random_bridge::Observable;

fn fig2() -> InfoModel {
    InfoModel::new(LengthLaw::exponential(0.1).unwrap(), -4.0, 4.0, 0.3).unwrap()
}

/// Small deterministic generator so the configurations are fixed.
fn lcg(state: &mut u64) -> f64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

#[test]
fn kernel_has_unit_mass() {
    let mut st = 17u64;
    for _ in 0..20 {
        let length = match (lcg(&mut st) * 3.0) as usize {
            0 => LengthLaw::exponential(0.05 + lcg(&mut st)).unwrap(),
            1 => LengthLaw::two_point(0.5 + lcg(&mut st), 3.0 + lcg(&mut st), 0.2 + 0.6 * lcg(&mut st)).unwrap(),
            _ => LengthLaw::uniform(0.5, 2.5 + 3.0 * lcg(&mut st)).unwrap(),
        };
        let z1 = -1.0 - 4.0 * lcg(&mut st);
        let z2 = 0.5 + 4.0 * lcg(&mut st);
        let m = InfoModel::new(length, z1, z2, 0.1 + 0.8 * lcg(&mut st)).unwrap();
        let t = 0.1 + 0.3 * lcg(&mut st);
        let x = 2.0 * lcg(&mut st) - 1.0;
        let u = t + 0.2 + 3.0 * lcg(&mut st);
        let k = info_transition(&m, t, x, false, u).unwrap();
        let mass = k.total_mass().unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "{m:?} t {t} x {x} u {u}: {mass}");
    }
}

#[test]
fn kernel_from_time_zero_is_the_marginal() {
    let m = fig2();
    let k = info_transition(&m, 0.0, 0.0, false, 2.0).unwrap();
    let f = 1.0 - (-0.2f64).exp();
    assert!((k.atoms()[0] - 0.3 * f).abs() < 1e-10);
    assert!((k.atoms()[1] - 0.7 * f).abs() < 1e-10);
    let g = Observable::Logistic { center: 0.5, scale: 1.0 };
    let a = k.expect(|y| random_bridge::Payoff::value(&g, 0.0, 0.0, y), &[]).unwrap();
    let b = unconditional_expectation(&m, 2.0, &g).unwrap();
    assert!((a - b).abs() < 1e-7, "{a} vs {b}");
}

#[test]
fn kernel_agrees_with_predictive() {
    let m = fig2();
    for &(t, x, u) in &[(1.0, 0.5, 2.0), (3.0, -2.0, 7.0), (0.5, 3.0, 0.6)] {
        let k = info_transition(&m, t, x, false, u).unwrap();
        for g in [Observable::Above(0.0), Observable::Value, Observable::Logistic { center: -1.0, scale: 0.5 }] {
            let a =
                k.expect(|y| random_bridge::Payoff::value(&g, 0.0, 0.0, y), &random_bridge::Payoff::kinks(&g)).unwrap();
            let b = info_predict(&m, t, x, false, u, &g).unwrap();
            assert!((a - b).abs() < 1e-6, "{g:?} ({t},{x},{u}): {a} vs {b}");
        }
    }
}

#[test]
fn chapman_kolmogorov() {
    let m = fig2();
    let (t, x, u, v) = (1.0, 0.5, 2.5, 4.0);
    let g = Observable::Logistic { center: 0.0, scale: 1.0 };
    let direct = info_predict(&m, t, x, false, v, &g).unwrap();
    let k = info_transition(&m, t, x, false, u).unwrap();
    let mut err = None;
    let composed = k
        .expect(
            |y| {
                let absorbed = m.pin_index(y).is_some();
                info_predict(&m, u, y, absorbed, v, &g).unwrap_or_else(|e| {
                    err.get_or_insert(e.to_string());
                    0.0
                })
            },
            &[],
        )
        .unwrap();
    assert!(err.is_none(), "{err:?}");
    assert!((direct - composed).abs() < 1e-4, "{direct} vs {composed}");
}

#[test]
fn not_time_homogeneous() {
    let m = fig2();
    let early = info_transition(&m, 1.0, 0.0, false, 2.0).unwrap();
    let late = info_transition(&m, 5.0, 0.0, false, 6.0).unwrap();
    let gap = (early.atoms()[1] - late.atoms()[1]).abs();
    assert!(gap > 1e-4, "atoms {:?} vs {:?}", early.atoms(), late.atoms());
    let d = (early.lebesgue(0.5).unwrap() - late.lebesgue(0.5).unwrap()).abs();
    assert!(d > 1e-4, "{d}");
}

#[test]
fn fixed_length_reduces_to_bridge_mixture() {
    // With τ = T and no absorption before u the kernel is a mixture of
    // Gaussian bridges to the pins, weighted by the pin posterior.
    let (big_t, t, x, u) = (3.0, 1.0, 0.4, 2.0);
    let m = InfoModel::new(LengthLaw::point_mass(big_t).unwrap(), -1.0, 2.0, 0.4).unwrap();
    let k = info_transition(&m, t, x, false, u).unwrap();
    assert_eq!(k.atoms(), [0.0, 0.0]);
    let pk = |tt: f64, d: f64| (-d * d / (2.0 * tt)).exp() / (2.0 * std::f64::consts::PI * tt).sqrt();
    let w: Vec<f64> = [(-1.0, 0.4), (2.0, 0.6)].iter().map(|&(z, p)| p * pk(big_t - t, z - x) / pk(big_t, z)).collect();
    let wsum: f64 = w.iter().sum();
    for y in [-1.0, 0.0, 0.7, 2.5] {
        let mut want = 0.0;
        for (j, &z) in [-1.0, 2.0].iter().enumerate() {
            let var = (big_t - u) * (u - t) / (big_t - t);
            let mean = ((big_t - u) * x + (u - t) * z) / (big_t - t);
            want += w[j] / wsum * pk(var, y - mean);
        }
        let got = k.lebesgue(y).unwrap();
        assert!((got - want).abs() < 1e-10 * (1.0 + want), "y {y}: {got} vs {want}");
    }
}

#[test]
fn right_continuity_at_positive_time() {
    let m = fig2();
    let g = Observable::Above(0.0);
    let start = Observation { time: 2.0, value: 0.7, absorbed: false };
    let approach: Vec<_> = (1..=12)
        .map(|n| {
            let dt = 2f64.powi(-n);
            Observation { time: 2.0 + dt, value: 0.7 + dt.sqrt() * 0.3, absorbed: false }
        })
        .collect();
    let res = right_continuity_probe(&m, 5.0, &g, Some(start), &approach).unwrap();
    assert!(res.gaps.last().unwrap() < &0.01, "{res:?}");
    assert!(res.gaps[11] < res.gaps[0]);
}

#[test]
fn continuity_at_zero_needs_positive_lengths() {
    let g = Observable::Value;
    assert!(right_continuity_probe(&fig2(), 1.0, &g, None, &[]).is_err());
    let m = InfoModel::new(LengthLaw::shifted_exponential(0.5, 1.0).unwrap(), -1.0, 3.0, 0.5).unwrap();
    let obs = [Observation { time: 1e-4, value: 0.001, absorbed: false }];
    let res = right_continuity_probe(&m, 2.0, &g, None, &obs).unwrap();
    assert!(res.gaps[0] < 0.01, "{res:?}");
}
