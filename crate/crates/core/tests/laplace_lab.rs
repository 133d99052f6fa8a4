use approx::assert_relative_eq;
use frackit_core::frac_ops::{rl_integral_sampled, SampledFunction, TimeGrid};
use frackit_core::laplace_lab::*;
use frackit_core::special_fn::{gamma, ml_generalized, MLParams};
use frackit_core::Error;
use num_complex::Complex64;

type Transform = fn(Complex64) -> Complex64;

/// (F, f) for the three elementary pairs used throughout.
fn elementary_pairs() -> [(Transform, fn(f64) -> f64); 3] {
    [
        (|s| 1.0 / s, |_| 1.0),
        (|s| 1.0 / (s + 1.0), |t| (-t).exp()),
        (|s| 1.0 / ((s + 1.0) * (s + 1.0)), |t| t * (-t).exp()),
    ]
}

#[test]
fn talbot_elementary_examples() {
    let v = laplace_invert(|s| 1.0 / s, 1.0, DEFAULT_TALBOT_NODES).unwrap();
    assert!((v - 1.0).abs() < 1e-10);
    let v = laplace_invert(|s| 1.0 / (s + 1.0), 1.0, DEFAULT_TALBOT_NODES).unwrap();
    assert!((v - (-1.0f64).exp()).abs() < 1e-10);
}

fn prabhakar_transform(gam: f64, beta: f64, delta: f64, a: f64) -> impl Fn(Complex64) -> Complex64 {
    move |s: Complex64| s.powf(-gam) * (1.0 - a * s.powf(-beta)).powf(-delta)
}

#[test]
fn prabhakar_pair_pinned_value() {
    // t^{γ−1} E^2_{0.5,1.5}(−t^{0.5}) at t = 1, extended-precision series
    let v = laplace_invert(prabhakar_transform(1.5, 0.5, 2.0, -1.0), 1.0, DEFAULT_TALBOT_NODES).unwrap();
    assert_relative_eq!(v, 0.273_212_014_783_898_56, max_relative = 1e-8);
}

#[test]
fn prabhakar_pair_parameter_grid() {
    let mut worst = 0.0f64;
    for a in [-0.5, -1.0] {
        for beta in [0.5, 0.8] {
            for gam in [0.7, 1.5] {
                for delta in [1.0, 2.0] {
                    let p = MLParams::new(beta, gam, delta).unwrap();
                    for t in [0.5, 1.0, 2.0] {
                        let inv = laplace_invert(prabhakar_transform(gam, beta, delta, a), t, DEFAULT_TALBOT_NODES).unwrap();
                        let exact = t.powf(gam - 1.0) * ml_generalized(&p, a * t.powf(beta)).unwrap().value;
                        worst = worst.max(((inv - exact) / exact).abs());
                    }
                }
            }
        }
    }
    assert!(worst < 1e-6, "worst relative error {worst:e}");
}

#[test]
fn forward_then_inverse_round_trip() {
    for (_, f) in elementary_pairs() {
        for t in [0.5, 1.0, 2.0] {
            let transform = |s: Complex64| laplace_forward_complex(f, s, 60.0, 1.0, 1e-14).unwrap().0;
            let v = laplace_invert_euler(transform, t, DEFAULT_EULER_ORDER).unwrap();
            assert!((v - f(t)).abs() < 1e-6, "t = {t}: {v} vs {}", f(t));
        }
    }
}

#[test]
fn doubling_talbot_nodes_gains_a_decade() {
    for (big_f, f) in elementary_pairs() {
        for t in [0.5, 1.0, 2.0] {
            let coarse = (talbot_value(big_f, t, 8) - f(t)).abs();
            let fine = (talbot_value(big_f, t, 16) - f(t)).abs();
            assert!(fine * 10.0 <= coarse, "t = {t}: {coarse:e} -> {fine:e}");
        }
    }
}

#[test]
fn inversion_reports_failures() {
    assert!(matches!(
        laplace_invert(|s| 1.0 / s, 1.0, 2),
        Err(Error::InvalidParameter { name: "nodes", .. })
    ));
    assert!(matches!(
        laplace_invert(|_| Complex64::new(f64::NAN, 0.0), 1.0, 32),
        Err(Error::InversionNotConverged { .. })
    ));
    // too few nodes for e^{−t}: the half-node estimate disagrees
    assert!(matches!(
        laplace_invert(|s| 1.0 / (s + 1.0), 1.0, 8),
        Err(Error::InversionNotConverged { .. })
    ));
    assert!(laplace_invert(|s| 1.0 / s, 0.0, 32).is_err());
}

#[test]
fn forward_examples() {
    let v = laplace_forward(|_| 1.0, 2.0, 40.0, 1e-14).unwrap();
    assert_relative_eq!(v.value, 0.5, max_relative = 1e-12);
    let v = laplace_forward(|t| (-t).exp(), 1.0, 40.0, 1e-14).unwrap();
    assert_relative_eq!(v.value, 0.5, max_relative = 1e-12);
    // t^{−1/2}/Γ(1/2) ↦ s^{−1/2}
    let v = laplace_forward(|t| t.powf(-0.5) / gamma(0.5), 1.0, 40.0, 1e-14).unwrap();
    assert_relative_eq!(v.value, 1.0, max_relative = 1e-10);
}

#[test]
fn forward_tail_names_sufficient_horizon() {
    let err = laplace_forward(|_| 1.0, 0.1, 10.0, 1e-8).unwrap_err();
    let Error::TailTooLarge { required_horizon, .. } = err else {
        panic!("unexpected {err}")
    };
    let v = laplace_forward(|_| 1.0, 0.1, required_horizon * 1.001, 1e-8).unwrap();
    assert!((v.value - 10.0).abs() <= 1e-8 + v.error);
}

#[test]
fn sampled_fractional_integral_has_power_transform() {
    // L{I^{1/2}[t e^{−t}]} = s^{−1/2} / (s + 1)²
    let g = TimeGrid::graded(20.0, 20 * 256).unwrap();
    let f = SampledFunction::from_fn(&g, |t| t * (-t).exp()).unwrap();
    let integral = rl_integral_sampled(0.5, &f).unwrap();
    for s in [1.0, 2.0, 5.0, 10.0] {
        let v = laplace_forward_sampled(&integral, s, 1e-9).unwrap().value;
        let exact = s.powf(-0.5) / ((s + 1.0) * (s + 1.0));
        // absolute: the transform falls from 0.25 to 3e-3 over this range
        assert!((v - exact).abs() < 1e-6, "s = {s}: {v} vs {exact}");
    }
}
