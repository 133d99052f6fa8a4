//! Numerical integration used by the oracles and diagnostics.
//!
//! * [`gauss_legendre`] fixed rules (used inside the convolution engine),
//! * [`gauss_kronrod`] adaptive G7/K15 for smooth integrands,
//! * [`tanh_sinh`] for finite intervals with endpoint singularities,
//! * [`exp_sinh`] for `[a, ∞)` with algebraic or exponential decay.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Integral estimate with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Nodes and weights of the m-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "rule needs at least one node");
    if m == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // three-term recurrence for P_m(x); dp is P_m'(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = mf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * GAUSS7_WEIGHTS[3];
    for j in 0..7 {
        let x = h * KRONROD_NODES[j];
        let s = f(c - x) + f(c + x);
        kronrod += KRONROD_WEIGHTS[j] * s;
        if j % 2 == 1 {
            gauss += GAUSS7_WEIGHTS[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on [a, b].
///
/// Subdivides the interval with the largest error until the summed error
/// is below `max(abs_tol, rel_tol·|I|)`.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    for _ in 0..5000 {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureNotConverged { value: total, error: err });
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            let value = intervals.iter().map(|iv| iv.2).collect::<CompensatedSum>().value();
            return Ok(Estimate { value, error: err });
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    let value: f64 = intervals.iter().map(|iv| iv.2).sum();
    let error: f64 = intervals.iter().map(|iv| iv.3).sum();
    Err(Error::QuadratureNotConverged { value, error })
}

const DE_MAX_LEVEL: usize = 12;

/// Tanh-sinh (double-exponential) quadrature on [a, b].
///
/// Abscissae near the endpoints are generated from their distance to the
/// endpoint, so integrable endpoint singularities such as t^{θ−1} are
/// handled without evaluating at the endpoint itself.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let half = 0.5 * (b - a);
    let eval_pair = |t: f64, f: &mut F| -> Option<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let d = 2.0 / (1.0 + (2.0 * u).exp()); // 1 − tanh(u)
        let w = FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        let off = half * d;
        let (xl, xr) = (a + off, b - off);
        if !(w > 0.0) || !w.is_finite() || (xl == a && xr == b) {
            return None;
        }
        // an abscissa that rounds onto its endpoint is dropped on that side only
        let left = if xl == a { 0.0 } else { f(xl) };
        let right = if xr == b { 0.0 } else { f(xr) };
        Some(w * (left + right))
    };
    let mut h = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(FRAC_PI_2 * f(0.5 * (a + b)));
    let mut k = 1;
    while let Some(v) = eval_pair(k as f64 * h, &mut f) {
        acc.add(v);
        k += 1;
    }
    let mut prev = acc.value() * h * half;
    for _level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = (2 * k - 1) as f64 * h;
            match eval_pair(t, &mut f) {
                Some(v) => acc.add(v),
                None => break,
            }
            k += 1;
        }
        let cur = acc.value() * h * half;
        let err = (cur - prev).abs();
        if !cur.is_finite() {
            return Err(Error::QuadratureNotConverged { value: cur, error: err });
        }
        if err <= rel_tol * cur.abs() || err < 1e-300 {
            return Ok(Estimate { value: cur, error: err });
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged {
        value: prev,
        error: f64::NAN,
    })
}

/// Exp-sinh quadrature on [a, ∞): x = a + exp(π/2·sinh t).
///
/// Suited to integrands decaying algebraically or exponentially, possibly
/// with an integrable singularity at `a`.
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, rel_tol: f64) -> Result<Estimate> {
    let mut eval = |t: f64, f: &mut F| -> Option<f64> {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = a + e;
        if !x.is_finite() || e == 0.0 || (x == a && t < 0.0) {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * e;
        let v = w * f(x);
        if v.is_nan() {
            return Some(f64::NAN);
        }
        Some(v)
    };
    // sweep outward from t = 0 in both directions until contributions vanish
    let sweep = |h: f64, odd_only: bool, f: &mut F, eval: &mut dyn FnMut(f64, &mut F) -> Option<f64>| -> f64 {
        let mut acc = CompensatedSum::new();
        for dir in [1.0, -1.0] {
            let mut k = 1usize;
            let mut negligible = 0;
            loop {
                let idx = if odd_only { 2 * k - 1 } else { k };
                let t = dir * idx as f64 * h;
                if t.abs() > 8.0 {
                    break;
                }
                match eval(t, f) {
                    Some(v) => {
                        acc.add(v);
                        if v.abs() <= 1e-20 * acc.value().abs() || v == 0.0 {
                            negligible += 1;
                            if negligible > 4 {
                                break;
                            }
                        } else {
                            negligible = 0;
                        }
                    }
                    None => break,
                }
                k += 1;
            }
        }
        acc.value()
    };
    let mut h = 0.5;
    let centre = eval(0.0, &mut f).unwrap_or(0.0);
    let mut sum = centre + sweep(h, false, &mut f, &mut eval);
    let mut prev = sum * h;
    for _level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        sum += sweep(h, true, &mut f, &mut eval);
        let cur = sum * h;
        let err = (cur - prev).abs();
        if !cur.is_finite() {
            return Err(Error::QuadratureNotConverged { value: cur, error: err });
        }
        if err <= rel_tol * cur.abs() || err < 1e-300 {
            return Ok(Estimate { value: cur, error: err });
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged {
        value: prev,
        error: f64::NAN,
    })
}
