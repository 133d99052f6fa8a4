//! Fundamental solution of the time-fractional diffusion equation
//! D_t^α N = c Δ N with point-mass initial data: residue series for odd
//! dimensions, one- and three-dimensional fast paths, the two-dimensional
//! small-r asymptote, and the one-sided stable density.

mod levy;
mod pde;
mod propagator;

pub use levy::{levy_density, levy_density_integral, levy_density_series, LevyQuery, LEVY_SERIES_MAX_CANCELLATION};
pub use pde::{pde_refinement_study, pde_residual_1d, pde_residual_1d_with};
pub use propagator::{
    msd_1d, propagator, propagator_1d, propagator_1d_auto, propagator_1d_value, propagator_2d_smallx, propagator_3d, DiffusionQuery,
    RELIABLE_A,
};

use crate::special_fn::{gamma, recip_gamma, sum_series, SeriesConfig, SeriesValue};
use crate::error::Result;

/// H^{2,0}_{1,2}[x | (a, α); (b1, 1), (b2, 1)] by its two residue families
/// (b1 − b2 must not be an integer):
///
/// ```text
/// Σ_l (−1)^l/l! Γ(b2−b1−l) x^{b1+l} / Γ(a−α(b1+l)) + (b1 ↔ b2)
/// ```
pub fn h20_12(x: f64, a: f64, alpha: f64, b1: f64, b2: f64) -> Result<SeriesValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(crate::Error::invalid("x", format!("must be finite and > 0, got {x}")));
    }
    let d = b1 - b2;
    if d == d.round() {
        return Err(crate::Error::invalid("b1", "b1 − b2 must not be an integer"));
    }
    let cfg = SeriesConfig::default();
    let family = |b: f64, other: f64| -> Result<SeriesValue> {
        let mut p = x.powf(b);
        let mut g = gamma(other - b);
        sum_series(
            |l| {
                let lf = l as f64;
                if l > 0 {
                    p *= -x / lf;
                    g /= other - b - lf;
                }
                p * g * recip_gamma(a - alpha * (b + lf))
            },
            &cfg,
        )
    };
    Ok(family(b1, b2)?.combine(family(b2, b1)?, &cfg))
}
