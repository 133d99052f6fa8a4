//! Numerical Laplace transforms: forward by quadrature, inverse by
//! fixed-Talbot contour summation or by the Euler-accelerated Bromwich
//! series. Used only as an oracle for closed forms.

use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frac_ops::SampledFunction;
use crate::quad::{gauss_kronrod, tanh_sinh, Estimate};

/// Default node count of [`laplace_invert`].
pub const DEFAULT_TALBOT_NODES: usize = 32;
/// Default order of [`laplace_invert_euler`].
pub const DEFAULT_EULER_ORDER: usize = 16;

fn required_horizon(s: f64, sup: f64, tol: f64) -> f64 {
    ((sup / (s * tol)).ln() / s).max(0.0)
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::invalid("s", format!("must be finite and > 0, got {s}")));
    }
    Ok(())
}

fn check_tail(s: f64, horizon: f64, sup: f64, tail_tol: f64) -> Result<f64> {
    let tail = (-s * horizon).exp() * sup / s;
    if !(tail <= tail_tol) {
        return Err(Error::TailTooLarge {
            s,
            required_horizon: required_horizon(s, sup, tail_tol),
        });
    }
    Ok(tail)
}

/// ∫_0^∞ e^{−st} f(t) dt, integrating over [0, `horizon`] with tanh-sinh
/// (integrable endpoint singularities are fine) and bounding the rest by
/// e^{−sT} sup_{t≥T}|f| / s with `sup_beyond` as the caller's bound on |f|.
///
/// Fails with [`Error::TailTooLarge`] (naming the horizon that would do)
/// when the tail bound exceeds `tail_tol`.
pub fn laplace_forward_bounded<F: Fn(f64) -> f64>(
    f: F,
    s: f64,
    horizon: f64,
    sup_beyond: f64,
    tail_tol: f64,
) -> Result<Estimate> {
    check_s(s)?;
    if !(horizon > 0.0) {
        return Err(Error::invalid("horizon", format!("must be > 0, got {horizon}")));
    }
    let tail = check_tail(s, horizon, sup_beyond.abs(), tail_tol)?;
    let q = tanh_sinh(|t| (-s * t).exp() * f(t), 0.0, horizon, 1e-13)?;
    Ok(Estimate {
        value: q.value,
        error: q.error + tail,
    })
}

/// [`laplace_forward_bounded`] with sup_{t≥T}|f| estimated from samples of
/// f on [T, 4T]. Suitable for eventually monotone f.
pub fn laplace_forward<F: Fn(f64) -> f64>(f: F, s: f64, horizon: f64, tail_tol: f64) -> Result<Estimate> {
    let sup = (0..=24)
        .map(|k| f(horizon * (1.0 + k as f64 / 8.0)).abs())
        .fold(0.0, f64::max);
    laplace_forward_bounded(f, s, horizon, sup, tail_tol)
}

/// ∫_0^T e^{−st}(linear interpolant) dt, exactly, with the tail beyond the
/// last node bounded by e^{−sT}|f(T)|/s (f assumed not to grow past T).
pub fn laplace_forward_sampled(f: &SampledFunction, s: f64, tail_tol: f64) -> Result<Estimate> {
    check_s(s)?;
    let t = f.times();
    let v = f.values();
    let t_max = f.grid().t_max();
    let tail = check_tail(s, t_max, v[v.len() - 1].abs(), tail_tol)?;
    let mut acc = 0.0;
    for k in 0..t.len().saturating_sub(1) {
        let delta = t[k + 1] - t[k];
        let (p1, p2) = cell_factors(s * delta);
        acc += (-s * t[k]).exp() * delta * (v[k] * p1 + v[k + 1] * p2);
    }
    Ok(Estimate {
        value: acc,
        error: tail + 1e-15 * acc.abs(),
    })
}

/// (∫_0^1 e^{−xy}(1−y) dy, ∫_0^1 e^{−xy} y dy).
fn cell_factors(x: f64) -> (f64, f64) {
    if x < 1.0 {
        // Taylor series; the closed forms cancel badly for small x
        let (mut p1, mut p2) = (0.0, 0.0);
        let mut term = 1.0; // (−x)^k / k!
        for k in 0..24 {
            let kf = k as f64;
            p1 += term / ((kf + 1.0) * (kf + 2.0));
            p2 += term / (kf + 2.0);
            term *= -x / (kf + 1.0);
        }
        return (p1, p2);
    }
    let e = (-x).exp();
    let p2 = (1.0 - e * (1.0 + x)) / (x * x);
    let p1 = (x - 1.0 + e) / (x * x);
    (p1, p2)
}

/// ∫_0^T e^{−st} f(t) dt for complex s with Re s > 0, by adaptive
/// Gauss–Kronrod on the real and imaginary parts; the tail is bounded by
/// e^{−Re(s)T} sup|f| / Re(s).
pub fn laplace_forward_complex<F: Fn(f64) -> f64>(
    f: F,
    s: Complex64,
    horizon: f64,
    sup_beyond: f64,
    tail_tol: f64,
) -> Result<(Complex64, f64)> {
    check_s(s.re)?;
    let tail = check_tail(s.re, horizon, sup_beyond.abs(), tail_tol)?;
    let re = gauss_kronrod(|t| (-s.re * t).exp() * (s.im * t).cos() * f(t), 0.0, horizon, 1e-16, 1e-14)?;
    let im = gauss_kronrod(|t| -(-s.re * t).exp() * (s.im * t).sin() * f(t), 0.0, horizon, 1e-16, 1e-14)?;
    Ok((Complex64::new(re.value, im.value), re.error + im.error + tail))
}

fn talbot_sum<F: Fn(Complex64) -> Complex64>(f: &F, t: f64, m: usize) -> (f64, f64, f64) {
    let mf = m as f64;
    let r = 2.0 * mf / (5.0 * t);
    let f0 = f(Complex64::new(r, 0.0)) * (r * t).exp();
    let mut re = 0.5 * f0.re;
    let mut im = 0.5 * f0.im;
    let mut scale = 0.5 * f0.norm();
    for k in 1..m {
        let th = k as f64 * PI / mf;
        let cot = th.cos() / th.sin();
        let sk = Complex64::new(r * th * cot, r * th);
        let sigma = th + (th * cot - 1.0) * cot;
        let dz = Complex64::new(1.0, sigma);
        let upper = (sk * t).exp() * f(sk) * dz;
        let lower = (sk.conj() * t).exp() * f(sk.conj()) * dz.conj();
        re += 0.5 * (upper.re + lower.re);
        im += 0.5 * (upper.im + lower.im);
        scale += 0.5 * (upper.norm() + lower.norm());
    }
    let w = r / mf;
    (re * w, im * w, scale * w)
}

/// The fixed-Talbot sum with `nodes` contour points, without any checks.
///
/// In double precision the contour integrand reaches ~e^{0.4·nodes} before
/// cancelling, so accuracy peaks around 16–32 nodes and then degrades.
pub fn talbot_value<F: Fn(Complex64) -> Complex64>(f: F, t: f64, nodes: usize) -> f64 {
    talbot_sum(&f, t, nodes.max(1)).0
}

/// Inverse Laplace transform at t by the fixed-Talbot rule with `nodes`
/// contour points. F must accept complex arguments on a contour wrapping
/// the negative real axis.
///
/// The result is checked two ways: the imaginary residue of the
/// conjugate-symmetric sum must stay below 1e-8 of the value, and the
/// half-node result must agree to 1e-4 relative.
pub fn laplace_invert<F: Fn(Complex64) -> Complex64>(f: F, t: f64, nodes: usize) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    if nodes < 4 {
        return Err(Error::invalid("nodes", "at least 4 contour nodes are required"));
    }
    let (value, imag, scale) = talbot_sum(&f, t, nodes);
    if !value.is_finite() {
        return Err(Error::InversionNotConverged {
            t,
            reason: "non-finite transform values on the contour".into(),
        });
    }
    let floor = 1e-13 * scale;
    if imag.abs() > 1e-8 * value.abs() + floor {
        return Err(Error::InversionNotConverged {
            t,
            reason: format!("imaginary residue {imag:e} against value {value:e}"),
        });
    }
    let (coarse, _, _) = talbot_sum(&f, t, nodes.div_ceil(2));
    if (coarse - value).abs() > 1e-4 * value.abs() + floor.max(1e-10 * scale) {
        return Err(Error::InversionNotConverged {
            t,
            reason: format!("node halving changed the value from {value:e} to {coarse:e}"),
        });
    }
    Ok(value)
}

/// Inverse Laplace transform at t by the Euler-summed Bromwich series
/// (Abate–Whitt) of order `m`: nodes lie on the vertical line
/// Re s = m·ln10/(3t), so F only needs to be known for Re s > 0 — e.g. a
/// numerically computed forward transform.
pub fn laplace_invert_euler<F: Fn(Complex64) -> Complex64>(f: F, t: f64, m: usize) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    if m == 0 || m > 40 {
        return Err(Error::invalid("m", "order must lie in 1..=40"));
    }
    let mf = m as f64;
    let mut xi = vec![1.0; 2 * m + 1];
    xi[0] = 0.5;
    xi[2 * m] = 0.5f64.powi(m as i32);
    let mut binom = 1.0;
    for k in 1..m {
        binom = binom * (mf - k as f64 + 1.0) / k as f64;
        xi[2 * m - k] = xi[2 * m - k + 1] + 0.5f64.powi(m as i32) * binom;
    }
    let a = mf * LN_10 / 3.0;
    let mut acc = 0.0;
    for (k, &x) in xi.iter().enumerate() {
        let s = Complex64::new(a, PI * k as f64) / t;
        let eta = if k % 2 == 0 { x } else { -x };
        acc += eta * f(s).re;
    }
    let value = 10f64.powf(mf / 3.0) / t * acc;
    if !value.is_finite() {
        return Err(Error::InversionNotConverged {
            t,
            reason: "non-finite transform values on the Bromwich line".into(),
        });
    }
    Ok(value)
}
