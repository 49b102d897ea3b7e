use gaussian_core::{gauss_logpdf, gauss_pdf};
use proptest::prelude::*;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

proptest! {
    #[test]
    fn symmetric_and_translation_invariant(t in 1e-3f64..50.0, x in -20.0f64..20.0, y in -20.0f64..20.0) {
        let a = gauss_pdf(t, x, y).unwrap();
        prop_assert_eq!(a, gauss_pdf(t, y, x).unwrap());
        prop_assert_eq!(a, gauss_pdf(t, x - y, 0.0).unwrap());
    }

    #[test]
    fn log_and_linear_agree(t in 1e-2f64..50.0, x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let a = gauss_pdf(t, x, y).unwrap();
        let b = gauss_logpdf(t, x, y).unwrap().exp();
        prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * a);
    }

    #[test]
    fn integrates_to_one(t in 1e-3f64..100.0, y in -10.0f64..10.0) {
        let s = t.sqrt();
        let v = simpson(|x| gauss_pdf(t, x, y).unwrap(), y - 10.0 * s, y + 10.0 * s, 4000);
        prop_assert!((v - 1.0).abs() < 1e-8);
    }
}
