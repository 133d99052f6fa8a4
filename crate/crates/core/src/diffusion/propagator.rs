use std::f64::consts::PI;

use super::levy::levy_density;
use super::LevyQuery;
use crate::error::{Error, Result};
use crate::special_fn::{gamma, recip_gamma, sum_series, SeriesConfig, SeriesValue};

/// Largest A = x²/(c t^α) for which the ascending series are trusted at
/// double precision.
pub const RELIABLE_A: f64 = 10.0;

/// Point query for the radially symmetric fundamental solution of
/// D_t^α N = c Δ N in n dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionQuery {
    pub dim: u32,
    pub alpha: f64,
    /// The diffusivity c^ν, as a single coefficient.
    pub c_nu: f64,
    pub r: f64,
    pub t: f64,
}

impl DiffusionQuery {
    pub fn new(dim: u32, alpha: f64, c_nu: f64, r: f64, t: f64) -> Result<Self> {
        let q = Self { dim, alpha, c_nu, r, t };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim", "must be >= 1"));
        }
        check_common(self.alpha, self.c_nu, self.t)?;
        if !(self.r >= 0.0) || !self.r.is_finite() {
            return Err(Error::invalid("r", format!("must be finite and >= 0, got {}", self.r)));
        }
        Ok(())
    }
}

pub(crate) fn check_common(alpha: f64, c_nu: f64, t: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(c_nu > 0.0) || !c_nu.is_finite() {
        return Err(Error::invalid("c_nu", format!("must be finite and > 0, got {c_nu}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    Ok(())
}

/// Fundamental solution for odd n from the two residue families of the
/// H^{2,0}_{1,2} representation, with X = r²/(4 c t^α):
///
/// ```text
/// N = (4π c t^α)^{−n/2} [ Σ_l (−X)^l Γ(1−n/2−l) / (l! Γ(1−α(n/2+l)))
///                       + Σ_l (−1)^l X^{1−n/2+l} Γ(n/2−1−l) / (l! Γ(1−α(1+l))) ]
/// ```
///
/// Diffusivity enters only through N(r; c) = c^{−n/2} N(r/√c; 1).
pub fn propagator(q: &DiffusionQuery) -> Result<SeriesValue> {
    q.validate()?;
    match q.dim {
        2 => {
            return Err(Error::UnsupportedDimension {
                n: 2,
                reason: "the residue series is singular; use propagator_2d_smallx",
            })
        }
        n if n % 2 == 0 => {
            return Err(Error::UnsupportedDimension {
                n,
                reason: "the residue series requires odd n",
            })
        }
        _ => {}
    }
    if q.r == 0.0 && q.dim >= 3 {
        return Err(Error::Domain(format!("the solution is singular at r = 0 for n = {}", q.dim)));
    }
    let cfg = SeriesConfig::default();
    let alpha = q.alpha;
    let half = q.dim as f64 / 2.0;
    let x = q.r * q.r / (4.0 * q.c_nu * q.t.powf(alpha));

    // (−X)^l / l! · Γ(1 − n/2 − l), by recurrence
    let mut p = 1.0;
    let mut g = gamma(1.0 - half);
    let regular = sum_series(
        |l| {
            let lf = l as f64;
            if l > 0 {
                p *= -x / lf;
                g /= 1.0 - half - lf;
            }
            p * g * recip_gamma(1.0 - alpha * (half + lf))
        },
        &cfg,
    )?;

    // (−1)^l X^{1−n/2+l} / l! · Γ(n/2 − 1 − l)
    let mut p = x.powf(1.0 - half);
    let mut g = gamma(half - 1.0);
    let singular = sum_series(
        |l| {
            let lf = l as f64;
            if l > 0 {
                p *= -x / lf;
                g /= half - 1.0 - lf;
            }
            p * g * recip_gamma(1.0 - alpha * (1.0 + lf))
        },
        &cfg,
    )?;

    let prefactor = (4.0 * PI * q.c_nu * q.t.powf(alpha)).powf(-half);
    Ok(regular.combine(singular, &cfg).scaled(prefactor))
}

/// One-dimensional fundamental solution as an ascending series in
/// A^{1/2}, A = x²/(c t^α):
///
/// N = 1/(2 c^{1/2} t^{α/2}) Σ_l (−1)^l A^{l/2} / (Γ(1 − α(l+1)/2) l!).
///
/// At α = 1 the odd terms vanish and the sum is the Gaussian heat kernel.
pub fn propagator_1d(alpha: f64, c_nu: f64, x: f64, t: f64) -> Result<SeriesValue> {
    check_common(alpha, c_nu, t)?;
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    let z = x.abs() / (c_nu * t.powf(alpha)).sqrt();
    let mut p = 1.0;
    let v = sum_series(
        |l| {
            let lf = l as f64;
            if l > 0 {
                p *= -z / lf;
            }
            p * recip_gamma(1.0 - alpha * (lf + 1.0) / 2.0)
        },
        &SeriesConfig::default(),
    )?;
    Ok(v.scaled(0.5 / (c_nu * t.powf(alpha)).sqrt()))
}

/// The one-dimensional solution at any A: the series for A ≤
/// [`RELIABLE_A`], beyond that the subordination identity
///
/// N = 1/(2 c^{1/2} t^{α/2}) · u^{1+ν} Φ_ν(u) / ν,  ν = α/2,  u = A^{−1/α},
///
/// with Φ_ν the one-sided stable density.
pub fn propagator_1d_auto(alpha: f64, c_nu: f64, x: f64, t: f64) -> Result<SeriesValue> {
    check_common(alpha, c_nu, t)?;
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    let scale = (c_nu * t.powf(alpha)).sqrt();
    let z = x.abs() / scale;
    if z * z <= RELIABLE_A {
        return propagator_1d(alpha, c_nu, x, t);
    }
    let nu = alpha / 2.0;
    let u = z.powf(-1.0 / nu);
    if u < f64::MIN_POSITIVE {
        return Ok(SeriesValue::exact(0.0));
    }
    let phi = levy_density(&LevyQuery::new(nu, u)?)?;
    Ok(phi.scaled(0.5 / scale * u.powf(1.0 + nu) / nu))
}

/// Value of [`propagator_1d_auto`].
pub fn propagator_1d_value(alpha: f64, c_nu: f64, x: f64, t: f64) -> Result<f64> {
    Ok(propagator_1d_auto(alpha, c_nu, x, t)?.value)
}

/// Three-dimensional fundamental solution, A = r²/(c t^α):
///
/// N = 1/(4π c^{3/2} t^{3α/2} A^{1/2}) Σ_l (−1)^l A^{l/2} / (Γ(1 − α(1 + l/2)) l!).
pub fn propagator_3d(alpha: f64, c_nu: f64, r: f64, t: f64) -> Result<SeriesValue> {
    check_common(alpha, c_nu, t)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("r must be finite and > 0 in three dimensions, got {r}")));
    }
    let ta = t.powf(alpha);
    let z = r / (c_nu * ta).sqrt();
    let mut p = 1.0;
    let v = sum_series(
        |l| {
            let lf = l as f64;
            if l > 0 {
                p *= -z / lf;
            }
            p * recip_gamma(1.0 - alpha * (1.0 + lf / 2.0))
        },
        &SeriesConfig::default(),
    )?;
    Ok(v.scaled(1.0 / (4.0 * PI * c_nu.powf(1.5) * ta.powf(1.5) * z)))
}

/// Small-r asymptote in two dimensions, ln(t^{α/2}/r) / (π Γ(1−α) t^α),
/// with c entering through N(r; c) = c^{−1} N(r/√c; 1). Asymptotic only.
pub fn propagator_2d_smallx(alpha: f64, c_nu: f64, r: f64, t: f64) -> Result<f64> {
    check_common(alpha, c_nu, t)?;
    if alpha == 1.0 {
        return Err(Error::invalid("alpha", "Γ(1−α) has a pole at α = 1; use the Gaussian heat kernel"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("must be finite and > 0, got {r}")));
    }
    let x = r / c_nu.sqrt();
    Ok((t.powf(alpha / 2.0) / x).ln() / (PI * gamma(1.0 - alpha) * t.powf(alpha)) / c_nu)
}

/// ⟨x²⟩(t) = 2 c t^α / Γ(1+α) in one dimension.
pub fn msd_1d(alpha: f64, c_nu: f64, t: f64) -> Result<f64> {
    check_common(alpha, c_nu, t)?;
    Ok(2.0 * c_nu * t.powf(alpha) * recip_gamma(1.0 + alpha))
}
