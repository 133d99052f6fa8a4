use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::gauss_kronrod;
use crate::special_fn::{ln_gamma, sin_pi, sum_series, SeriesConfig, SeriesValue};

/// Cancellation ratio above which the residue series is abandoned for the
/// integral representation.
pub const LEVY_SERIES_MAX_CANCELLATION: f64 = 1e4;

/// Point query for the one-sided stable density Φ_ρ with Laplace transform
/// e^{−u^ρ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyQuery {
    pub rho: f64,
    pub t: f64,
}

impl LevyQuery {
    pub fn new(rho: f64, t: f64) -> Result<Self> {
        let q = Self { rho, t };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::invalid("rho", format!("must lie in (0, 1), got {}", self.rho)));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::invalid("t", format!("must be finite and > 0, got {}", self.t)));
        }
        Ok(())
    }
}

/// Φ_ρ(t). ρ = 1/2 is elementary, t^{−3/2} e^{−1/(4t)} / (2√π); otherwise
/// the residue series is used where it is well conditioned (large t) and
/// the integral representation elsewhere.
pub fn levy_density(q: &LevyQuery) -> Result<SeriesValue> {
    q.validate()?;
    if q.rho == 0.5 {
        return Ok(SeriesValue::exact(levy_half(q.t)));
    }
    // terms grow like t^{−kρ}/Γ(k(1−ρ)); hopeless once t^{−ρ} is large
    if q.t.powf(-q.rho) <= 4.0 {
        if let Ok(v) = levy_density_series(q.rho, q.t) {
            if v.cancellation_ratio <= LEVY_SERIES_MAX_CANCELLATION {
                return Ok(v);
            }
        }
    }
    let (value, error) = levy_density_integral(q.rho, q.t)?;
    Ok(SeriesValue {
        abs_error_estimate: error,
        ..SeriesValue::exact(value)
    })
}

fn levy_half(t: f64) -> f64 {
    t.powf(-1.5) * (-0.25 / t).exp() / (2.0 * PI.sqrt())
}

/// Φ_ρ(t) = (1/π) Σ_{k≥1} (−1)^{k+1} Γ(kρ+1) sin(πkρ) t^{−kρ−1} / k!.
///
/// Converges for every t > 0 but cancels badly once t^{−ρ} is large.
pub fn levy_density_series(rho: f64, t: f64) -> Result<SeriesValue> {
    LevyQuery::new(rho, t)?;
    let lt = t.ln();
    let v = sum_series(
        |n| {
            let k = (n + 1) as f64;
            let s = sin_pi(k * rho);
            if s == 0.0 {
                return 0.0;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let mag = (ln_gamma(k * rho + 1.0) - ln_gamma(k + 1.0) - (k * rho + 1.0) * lt).exp();
            sign * s * mag
        },
        &SeriesConfig::default(),
    )?;
    Ok(v.scaled(1.0 / PI))
}

/// Φ_ρ(t) from the integral representation
///
/// ```text
/// Φ_ρ(t) = ρ/(1−ρ) t^{−1/(1−ρ)} (1/π) ∫_0^π a(φ) exp(−t^{−ρ/(1−ρ)} a(φ)) dφ,
/// a(φ) = (sin ρφ / sin φ)^{1/(1−ρ)} sin((1−ρ)φ) / sin ρφ,
/// ```
///
/// valid for all t and free of cancellation. Returns (value, error).
pub fn levy_density_integral(rho: f64, t: f64) -> Result<(f64, f64)> {
    LevyQuery::new(rho, t)?;
    let p = 1.0 / (1.0 - rho);
    let w = t.powf(-rho * p);
    let a = |phi: f64| -> f64 {
        let sr = (rho * phi).sin();
        (sr / phi.sin()).powf(p) * ((1.0 - rho) * phi).sin() / sr
    };
    // a is increasing with minimum a(0+) = (1−ρ) ρ^{ρ/(1−ρ)}; factor it out
    let a0 = (1.0 - rho) * rho.powf(rho * p);
    let integrand = |phi: f64| -> f64 {
        let v = a(phi);
        if !v.is_finite() {
            return 0.0;
        }
        v * (-w * (v - a0)).exp()
    };
    let log_pre = (rho * p).ln() - p * t.ln() - PI.ln() - w * a0;
    if log_pre < -750.0 {
        // underflows; w is also large enough here to amplify rounding in a
        return Ok((0.0, 0.0));
    }
    // beyond w(a − a0) = 40 the integrand is below e^{−40} of its peak;
    // a is increasing, so bisect for that point and integrate up to it
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..45 {
        let mid = 0.5 * (lo + hi);
        if w * (a(mid) - a0) < 40.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = gauss_kronrod(integrand, 0.0, hi, 0.0, 1e-12)?;
    let pre = log_pre.exp();
    Ok((pre * q.value, pre * q.error))
}
