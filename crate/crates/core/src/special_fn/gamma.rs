//! Gamma, log-gamma and reciprocal gamma for real arguments.
//!
//! The reciprocal gamma function is the primitive: it is entire, so the
//! poles of Γ at 0, −1, −2, … map to exact zeros instead of infinities.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Above this argument Γ(x) overflows an f64.
const GAMMA_OVERFLOW: f64 = 171.0;

/// Exact factorials 0! .. 22! (all exactly representable).
const FACTORIALS: [f64; 23] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0,
];

fn lanczos_sum(xm1: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    acc
}

/// Γ(x) for x ≥ 0.5 and x < 171.
fn gamma_pos(x: f64) -> f64 {
    if x == x.floor() && x <= 23.0 {
        return FACTORIALS[x as usize - 1];
    }
    let xm1 = x - 1.0;
    let w = xm1 + LANCZOS_G + 0.5;
    // split the power so w^(x-1/2) does not overflow before e^-w is applied
    let half = w.powf(0.5 * (xm1 + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-w).exp()) * lanczos_sum(xm1)
}

/// ln Γ(x) for x ≥ 0.5.
fn ln_gamma_pos(x: f64) -> f64 {
    if x < GAMMA_OVERFLOW {
        if x == x.floor() && x <= 23.0 {
            return FACTORIALS[x as usize - 1].ln();
        }
        if x <= 20.0 {
            return gamma_pos(x).ln();
        }
    }
    let xm1 = x - 1.0;
    let w = xm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * w.ln() - w + lanczos_sum(xm1).ln()
}

/// sin(πx), exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to r in [-1, 1]
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        (PI * (-1.0 - r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// True when `x` is 0, −1, −2, … (a pole of Γ).
#[inline]
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Γ(x). Returns ±∞ at poles (sign undetermined; callers wanting the
/// entire function should use [`recip_gamma`]).
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_gamma_pole(x) {
        return f64::INFINITY;
    }
    if x >= 0.5 {
        if x >= GAMMA_OVERFLOW + 0.6 {
            return f64::INFINITY;
        }
        gamma_pos(x)
    } else {
        PI / (sin_pi(x) * gamma(1.0 - x))
    }
}

/// ln|Γ(x)| together with the sign of Γ(x). At poles returns (+∞, 0).
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if is_gamma_pole(x) {
        return (f64::INFINITY, 0.0);
    }
    if x >= 0.5 {
        (ln_gamma_pos(x), 1.0)
    } else {
        let s = sin_pi(x);
        (
            PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x),
            s.signum(),
        )
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_signed(x).0
}

/// 1/Γ(x); exactly 0 at x ∈ {0, −1, −2, …}.
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x >= 0.5 {
        if x < GAMMA_OVERFLOW {
            1.0 / gamma_pos(x)
        } else {
            (-ln_gamma_pos(x)).exp()
        }
    } else {
        let y = 1.0 - x;
        let s = sin_pi(x);
        if y < GAMMA_OVERFLOW {
            s * gamma_pos(y) / PI
        } else {
            s.signum() * (ln_gamma_pos(y) + s.abs().ln() - PI.ln()).exp()
        }
    }
}

/// Rising factorial (δ)_τ = δ(δ+1)…(δ+τ−1), with (δ)_0 = 1.
pub fn pochhammer(delta: f64, tau: u32) -> Result<f64> {
    let mut acc = 1.0;
    for k in 0..tau {
        acc *= delta + k as f64;
        if !acc.is_finite() {
            return Err(Error::PochhammerOverflow { tau: k + 1 });
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn recip_gamma_values() {
        assert_eq!(recip_gamma(1.0), 1.0);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert_relative_eq!(recip_gamma(0.5), 1.0 / PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(recip_gamma(-0.5), -1.0 / (2.0 * PI.sqrt()), max_relative = 1e-14);
    }

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(1.5), PI.sqrt() / 2.0, max_relative = 1e-15);
        assert_relative_eq!(gamma(0.25), 3.625_609_908_221_908_3, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.75), 1.225_416_702_465_177_6, max_relative = 1e-14);
        assert_relative_eq!(gamma(170.5), 5.562_092_414_559_999_6e305, max_relative = 1e-12);
        assert_relative_eq!(gamma(-1.5), 4.0 * PI.sqrt() / 3.0, max_relative = 1e-14);
        assert_eq!(gamma(5.0), 24.0);
    }

    #[test]
    fn ln_gamma_large_argument() {
        // ln Γ(1000) from Stirling with correction terms
        let x: f64 = 1000.0;
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3));
        assert_relative_eq!(ln_gamma(x), stirling, max_relative = 1e-14);
        assert!(recip_gamma(150.0) > 0.0);
        assert_eq!(recip_gamma(400.0), 0.0);
    }

    #[test]
    fn sin_pi_exact_at_integers() {
        for k in -10..10 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert_relative_eq!(sin_pi(0.5), 1.0);
        assert_relative_eq!(sin_pi(-2.5), -1.0);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.0, 4).unwrap(), 360.0);
        assert_eq!(pochhammer(2.5, 0).unwrap(), 1.0);
        assert_eq!(pochhammer(0.5, 2).unwrap(), 0.75);
        match pochhammer(10.0, 400) {
            Err(Error::PochhammerOverflow { tau }) => assert!(tau > 100),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn reflection_identity(x in 0.001f64..0.999) {
            let lhs = recip_gamma(x) * recip_gamma(1.0 - x);
            let rhs = sin_pi(x) / PI;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }

        #[test]
        fn pochhammer_recurrence(delta in 0.01f64..20.0, tau in 0u32..60) {
            let a = pochhammer(delta, tau).unwrap();
            let b = pochhammer(delta, tau + 1).unwrap();
            let expect = a * (delta + tau as f64);
            prop_assert!((b - expect).abs() <= 4.0 * f64::EPSILON * expect.abs());
        }

        #[test]
        fn recurrence_gamma(x in -20.0f64..150.0) {
            prop_assume!(!is_gamma_pole(x) && !is_gamma_pole(x + 1.0));
            // 1/Γ(x) = x / Γ(x+1)
            let lhs = recip_gamma(x);
            let rhs = x * recip_gamma(x + 1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
        }
    }
}
