use approx::assert_relative_eq;
use frackit_core::frac_ops::{
    caputo_derivative_sampled, rl_integral_power, rl_integral_sampled, singular_convolve, FnKernel,
    MittagLefflerKernel, PowerKernel, SampledFunction, TimeGrid,
};
use frackit_core::special_fn::gamma;

fn sample(grid: &TimeGrid, f: impl Fn(f64) -> f64) -> SampledFunction {
    SampledFunction::from_fn(grid, f).unwrap()
}

#[test]
fn rl_integral_of_constant_is_exact() {
    let g = TimeGrid::uniform(1.0, 100).unwrap();
    let out = rl_integral_sampled(0.5, &sample(&g, |_| 1.0)).unwrap();
    assert_eq!(out.values()[0], 0.0);
    for (&t, &v) in g.nodes().iter().zip(out.values()).skip(1) {
        assert_relative_eq!(v, t.sqrt() / gamma(1.5), max_relative = 1e-13);
    }
}

#[test]
fn rl_integral_of_linear_is_exact() {
    let g = TimeGrid::uniform(2.0, 64).unwrap();
    let out = rl_integral_sampled(1.0, &sample(&g, |u| u)).unwrap();
    for (&t, &v) in g.nodes().iter().zip(out.values()).skip(1) {
        assert_relative_eq!(v, t * t / 2.0, max_relative = 1e-13);
    }
}

#[test]
fn rl_integral_of_square_is_second_order() {
    let mut errs = Vec::new();
    for n in [256, 512] {
        let g = TimeGrid::uniform(1.0, n).unwrap();
        let out = rl_integral_sampled(0.5, &sample(&g, |u| u * u)).unwrap();
        let err = g
            .nodes()
            .iter()
            .zip(out.values())
            .map(|(&t, &v)| (v - 2.0 / gamma(3.5) * t.powf(2.5)).abs())
            .fold(0.0, f64::max);
        errs.push(err);
    }
    let h = 1.0 / 512.0;
    assert!(errs[1] < h * h, "max error {} at h = 1/512", errs[1]);
    assert!(errs[0] / errs[1] > 3.5, "ratio {}", errs[0] / errs[1]);
}

#[test]
fn caputo_examples() {
    let g = TimeGrid::uniform(1.0, 512).unwrap();
    let d = caputo_derivative_sampled(0.5, &sample(&g, |t| t)).unwrap();
    for (&t, &v) in g.nodes().iter().zip(d.values()).skip(1) {
        assert_relative_eq!(v, t.sqrt() / gamma(1.5), max_relative = 1e-12);
    }
    let d = caputo_derivative_sampled(0.5, &sample(&g, |_| 4.0)).unwrap();
    assert!(d.values().iter().all(|&v| v == 0.0));

    // f = t², error O(h^{2−α})
    let d = caputo_derivative_sampled(0.5, &sample(&g, |t| t * t)).unwrap();
    let h: f64 = 1.0 / 512.0;
    let err = g
        .nodes()
        .iter()
        .zip(d.values())
        .map(|(&t, &v)| (v - 2.0 * t.powf(1.5) / gamma(2.5)).abs())
        .fold(0.0, f64::max);
    assert!(err < h.powf(1.5), "max error {err}");
}

#[test]
fn convolution_examples() {
    let g = TimeGrid::graded(2.0, 256).unwrap();
    let one = sample(&g, |_| 1.0);

    let k = PowerKernel::riemann_liouville(0.3).unwrap();
    let out = singular_convolve(&one, &k).unwrap();
    for (&t, &v) in g.nodes().iter().zip(out.values()).skip(1) {
        assert_relative_eq!(v, rl_integral_power(0.3, 1.0, t), max_relative = 1e-13);
    }

    // s^0 E_{1,1}(−s) = e^{−s}
    let k = MittagLefflerKernel::new(1.0, 1.0, 1.0, -1.0, 2.0).unwrap();
    let out = singular_convolve(&one, &k).unwrap();
    for (&t, &v) in g.nodes().iter().zip(out.values()).skip(1) {
        assert_relative_eq!(v, 1.0 - (-t).exp(), max_relative = 1e-12);
    }

    // ∫_0^1 u (1−u)^{−1/2}/Γ(1/2) du = Γ(2)/Γ(2.5)
    let g = TimeGrid::uniform(1.0, 64).unwrap();
    let k = PowerKernel::riemann_liouville(0.5).unwrap();
    let out = singular_convolve(&sample(&g, |u| u), &k).unwrap();
    assert_relative_eq!(out.values()[64], 0.75225277806367504926, max_relative = 1e-13);
}

#[test]
fn nonintegrable_kernel_is_rejected() {
    assert!(FnKernel::new(0.0, |_| 1.0).is_err());
    assert!(PowerKernel::new(-1.0, 1.0).is_err());
}

#[test]
fn semigroup_property() {
    let g = TimeGrid::uniform(1.0, 1024).unwrap();
    let last = g.len() - 1;
    for f in [|_: f64| 1.0, |t: f64| t, |t: f64| t * t] {
        let s = sample(&g, f);
        let twice = rl_integral_sampled(0.3, &rl_integral_sampled(0.4, &s).unwrap()).unwrap();
        let once = rl_integral_sampled(0.7, &s).unwrap();
        let rel = (twice.values()[last] - once.values()[last]).abs() / once.values()[last].abs();
        assert!(rel < 1e-4, "relative mismatch {rel}");
    }
}

#[test]
fn caputo_is_left_inverse_of_rl_integral() {
    let g = TimeGrid::uniform(1.0, 2048).unwrap();
    let f = sample(&g, |t| t * t);
    let back = caputo_derivative_sampled(0.5, &rl_integral_sampled(0.5, &f).unwrap()).unwrap();
    let rel = (back.values()[2048] - 1.0).abs();
    assert!(rel < 1e-2, "relative error {rel}");
}

#[test]
fn operators_are_linear() {
    let g = TimeGrid::graded(1.0, 40).unwrap();
    let f = sample(&g, |t| (2.0 * t).sin());
    let h = sample(&g, |t| t.sqrt());
    let combo = f.linear_combination(2.0, &h, -3.0).unwrap();
    let ops: [&dyn Fn(&SampledFunction) -> SampledFunction; 2] = [
        &|x| rl_integral_sampled(0.6, x).unwrap(),
        &|x| caputo_derivative_sampled(0.6, x).unwrap(),
    ];
    for op in ops {
        let lhs = op(&combo);
        let rhs = op(&f).linear_combination(2.0, &op(&h), -3.0).unwrap();
        for (a, b) in lhs.values().iter().zip(rhs.values()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn mismatched_grids_are_rejected() {
    let a = SampledFunction::zeros(&TimeGrid::uniform(1.0, 4).unwrap());
    let b = SampledFunction::zeros(&TimeGrid::uniform(1.0, 5).unwrap());
    assert!(a.linear_combination(1.0, &b, 1.0).is_err());
}
