//! The Mittag-Leffler family: classical E_ν, two-parameter E_{α,β} and the
//! three-parameter (Prabhakar) function
//!
//! ```text
//! E^δ_{β,γ}(z) = Σ_{τ≥0} (δ)_τ z^τ / (Γ(βτ + γ) τ!)
//! ```
//!
//! All of them are evaluated by the same compensated power series; there is
//! no asymptotic branch, so large |z| shows up as a cancellation warning.

use super::gamma::{ln_gamma, recip_gamma};
use super::series::{sum_series, SeriesConfig, SeriesValue};
use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Parameter triple (β, γ, δ) of E^δ_{β,γ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MLParams {
    pub fn new(beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", format!("must be finite and > 0, got {beta}")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::invalid("gamma", format!("must be finite and >= 0, got {gamma}")));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::invalid("delta", format!("must be finite and > 0, got {delta}")));
        }
        Ok(Self { beta, gamma, delta })
    }

    /// E_{α,β}: the δ = 1 case.
    pub fn two_param(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0)
    }

    /// E_ν: the δ = 1, γ = 1 case.
    pub fn classical(nu: f64) -> Result<Self> {
        Self::new(nu, 1.0, 1.0)
    }
}

/// One series coefficient (δ)_τ / (τ! Γ(βτ+γ)), kept both directly (when it
/// is a normal float) and as sign + log-magnitude.
#[derive(Debug, Clone, Copy)]
struct Coefficient {
    direct: f64,
    ln_abs: f64,
    sign: f64,
}

impl Coefficient {
    const ZERO: Coefficient = Coefficient {
        direct: 0.0,
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    /// c·z^τ, where `zpow` is the running product z^τ (possibly overflowed).
    #[inline]
    fn times_power(&self, z: f64, tau: usize, zpow: f64) -> f64 {
        if self.sign == 0.0 {
            return 0.0;
        }
        if tau == 0 {
            return if self.direct != 0.0 {
                self.direct
            } else {
                self.sign * self.ln_abs.exp()
            };
        }
        if self.direct.is_normal() && zpow.is_finite() && zpow != 0.0 {
            return self.direct * zpow;
        }
        if z == 0.0 {
            return 0.0;
        }
        let parity = if z < 0.0 && tau % 2 == 1 { -1.0 } else { 1.0 };
        self.sign * parity * (self.ln_abs + tau as f64 * z.abs().ln()).exp()
    }
}

/// Sequential generator of the Prabhakar coefficients.
struct CoefficientStream {
    params: MLParams,
    tau: usize,
    poch_ratio: f64,
    ln_poch_ratio: f64,
}

impl CoefficientStream {
    fn new(params: MLParams) -> Self {
        Self {
            params,
            tau: 0,
            poch_ratio: 1.0,
            ln_poch_ratio: 0.0,
        }
    }

    fn next_coefficient(&mut self) -> Coefficient {
        let MLParams { beta, gamma, delta } = self.params;
        let tau = self.tau;
        if tau > 0 {
            let f = (delta + tau as f64 - 1.0) / tau as f64;
            self.poch_ratio *= f;
            self.ln_poch_ratio += f.ln();
        }
        self.tau += 1;
        let arg = beta * tau as f64 + gamma;
        if arg == 0.0 {
            return Coefficient::ZERO;
        }
        // arg > 0 here since beta > 0, gamma >= 0
        let ln_abs = self.ln_poch_ratio - ln_gamma(arg);
        let direct = if arg < 150.0 && self.poch_ratio.is_finite() {
            let d = self.poch_ratio * recip_gamma(arg);
            if d.is_normal() {
                d
            } else {
                0.0
            }
        } else {
            0.0
        };
        Coefficient {
            direct,
            ln_abs,
            sign: 1.0,
        }
    }
}

fn sum_with_coefficients<F>(z: f64, offset: usize, mut coeff: F, cfg: &SeriesConfig) -> Result<SeriesValue>
where
    F: FnMut(usize) -> Coefficient,
{
    let mut zpow = 1.0f64;
    sum_series(
        |n| {
            let c = coeff(n + offset);
            let t = c.times_power(z, n, zpow);
            zpow *= z;
            t
        },
        cfg,
    )
}

/// Σ_{τ≥offset} c_τ z^{τ−offset} evaluated directly.
fn prabhakar_offset_sum(params: MLParams, offset: usize, z: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    let mut stream = CoefficientStream::new(params);
    for _ in 0..offset {
        stream.next_coefficient();
    }
    sum_with_coefficients(z, 0, |_| stream.next_coefficient(), cfg)
}

/// E^δ_{β,γ}(z) with the default series configuration.
pub fn ml_generalized(params: &MLParams, z: f64) -> Result<SeriesValue> {
    ml_generalized_with(params, z, &SeriesConfig::default())
}

/// E^δ_{β,γ}(z) with an explicit series configuration.
pub fn ml_generalized_with(params: &MLParams, z: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    if !z.is_finite() {
        return Err(Error::invalid("z", "must be finite"));
    }
    prabhakar_offset_sum(*params, 0, z, cfg)
}

/// Two-parameter function E_{α,β}(z).
pub fn ml_two_param(alpha: f64, beta: f64, z: f64) -> Result<SeriesValue> {
    ml_generalized(&MLParams::two_param(alpha, beta)?, z)
}

/// Classical function E_ν(z).
pub fn ml_classical(nu: f64, z: f64) -> Result<SeriesValue> {
    ml_generalized(&MLParams::classical(nu)?, z)
}

/// d/ds E^n_{ν,1}(λ s^ν) = Σ_{k≥1} (n)_k λ^k s^{kν−1} / (Γ(kν) k!).
///
/// Has an integrable s^{ν−1} singularity at the origin.
pub fn ml_deriv_kernel(nu: f64, lambda: f64, n: u32, s: f64) -> Result<SeriesValue> {
    if !(s > 0.0) {
        return Err(Error::invalid("s", format!("must be > 0, got {s}")));
    }
    let regular = ml_deriv_kernel_regular(nu, lambda, n, s)?;
    Ok(regular.scaled(s.powf(nu - 1.0)))
}

/// The continuous factor g(s) = s^{1−ν} · d/ds E^n_{ν,1}(λ s^ν), finite at s = 0.
pub fn ml_deriv_kernel_regular(nu: f64, lambda: f64, n: u32, s: f64) -> Result<SeriesValue> {
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    if !lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be finite"));
    }
    let params = MLParams::new(nu, 0.0, n as f64)?;
    let w = lambda * s.powf(nu);
    Ok(prabhakar_offset_sum(params, 1, w, &SeriesConfig::default())?.scaled(lambda))
}

/// Prabhakar series with coefficients precomputed for repeated evaluation
/// at arguments |z| ≤ `z_max`. Evaluates Σ_{τ≥offset} c_τ z^{τ−offset}.
///
/// Used by the convolution kernels, which evaluate the same function at
/// thousands of points.
#[derive(Debug, Clone)]
pub struct PrabhakarSeries {
    params: MLParams,
    offset: usize,
    coeffs: Vec<Coefficient>,
    cfg: SeriesConfig,
}

impl PrabhakarSeries {
    pub fn new(params: MLParams, offset: usize, z_max: f64) -> Self {
        let cfg = SeriesConfig::default();
        let mut stream = CoefficientStream::new(params);
        let mut coeffs = Vec::new();
        let ln_z = z_max.abs().max(1e-300).ln();
        let mut max_ln = f64::NEG_INFINITY;
        let mut small = 0;
        let cap = 4000;
        while coeffs.len() < cap {
            let c = stream.next_coefficient();
            let tau = coeffs.len();
            coeffs.push(c);
            if tau < offset {
                continue;
            }
            let ln_term = c.ln_abs + (tau - offset) as f64 * ln_z;
            max_ln = max_ln.max(ln_term);
            if ln_term < max_ln - 42.0 {
                small += 1;
                if small >= cfg.consecutive_small {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Self {
            params,
            offset,
            coeffs,
            cfg,
        }
    }

    pub fn params(&self) -> MLParams {
        self.params
    }

    pub fn eval(&self, z: f64) -> Result<SeriesValue> {
        let offset = self.offset;
        let mut fresh: Option<CoefficientStream> = None;
        let coeffs = &self.coeffs;
        let params = self.params;
        sum_with_coefficients(
            z,
            offset,
            |tau| {
                if tau < coeffs.len() {
                    coeffs[tau]
                } else {
                    let stream = fresh.get_or_insert_with(|| {
                        let mut s = CoefficientStream::new(params);
                        for _ in 0..coeffs.len() {
                            s.next_coefficient();
                        }
                        s
                    });
                    stream.next_coefficient()
                }
            },
            &self.cfg,
        )
    }

    /// Value only; NaN when the series fails to converge.
    #[inline]
    pub fn value(&self, z: f64) -> f64 {
        match self.cached_value(z) {
            Some(v) => v,
            None => self.eval(z).map(|v| v.value).unwrap_or(f64::NAN),
        }
    }

    /// The summation of `eval` without diagnostics; `None` if it would need
    /// coefficients beyond the cache or meets a non-finite term.
    fn cached_value(&self, z: f64) -> Option<f64> {
        let k = self.cfg.consecutive_small.max(1);
        let mut acc = CompensatedSum::new();
        let mut zpow = 1.0f64;
        let mut streak = 0;
        for n in 0..self.cfg.max_terms {
            let t = self.coeffs.get(n + self.offset)?.times_power(z, n, zpow);
            zpow *= z;
            if !t.is_finite() {
                return None;
            }
            acc.add(t);
            if t.abs() <= self.cfg.rel_tol * acc.value().abs() + self.cfg.abs_tol {
                streak += 1;
                if streak >= k {
                    return Some(acc.value());
                }
            } else {
                streak = 0;
            }
        }
        None
    }
}
