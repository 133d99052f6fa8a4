//! Closed forms and single-convolution solvers for structured term lists.

use super::problem::{Forcing, SolverConfig};
use crate::error::{Error, Result};
use crate::frac_ops::{
    singular_convolve, DerivativeKernel, FnKernel, MittagLefflerKernel, SampledFunction, TimeGrid,
};
use crate::special_fn::{gamma, ml_generalized, recip_gamma, sum_series, MLParams, SeriesConfig};

fn positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

/// Terms a_j = C(n, j) c^{jν}, ν_j = jν of (1 + c^ν s^{−ν})^n − 1.
pub fn binomial_terms(nu: f64, c: f64, n: u32) -> Vec<(f64, f64)> {
    let mut binom = 1.0;
    (1..=n)
        .map(|j| {
            binom = binom * (n - j + 1) as f64 / j as f64;
            (binom * c.powf(j as f64 * nu), j as f64 * nu)
        })
        .collect()
}

/// Terms a_r = a^r, ν_r = rν for r = 1..n.
pub fn geometric_terms(nu: f64, a: f64, n: u32) -> Vec<(f64, f64)> {
    (1..=n).map(|r| (a.powi(r as i32), r as f64 * nu)).collect()
}

/// N = N0 [f + f ∗ d/ds E^n_{ν,1}(−c^ν s^ν)], the solution for the
/// binomial term list (N0 = 1).
pub fn solve_binomial_cascade(
    nu: f64,
    c: f64,
    n: u32,
    forcing: &Forcing,
    grid: &TimeGrid,
    _cfg: &SolverConfig,
) -> Result<SampledFunction> {
    positive("nu", nu)?;
    positive("c", c)?;
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    let f = forcing.sample(grid)?;
    let kernel = DerivativeKernel::new(nu, -c.powf(nu), n, grid.t_max())?;
    let conv = singular_convolve(&f, &kernel)?;
    f.linear_combination(1.0, &conv, 1.0)
}

/// t^{γ−1} E^{δ+n}_{ν,γ}(−(ct)^ν): the binomial-cascade solution for the
/// matching Mittag-Leffler forcing (N0 = 1). n = 0 returns the forcing.
pub fn closed_form_cor22(nu: f64, gamma_: f64, delta: f64, c: f64, n: u32, t: f64) -> Result<f64> {
    positive("gamma", gamma_)?;
    positive("c", c)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if t == 0.0 && gamma_ < 1.0 {
        return Err(Error::Domain(format!("t^(gamma-1) is unbounded at t = 0 for gamma = {gamma_}")));
    }
    let p = MLParams::new(nu, gamma_, delta + n as f64)?;
    Ok(t.powf(gamma_ - 1.0) * ml_generalized(&p, -(c * t).powf(nu))?.value)
}

/// t^{ρ−1} Γ(ρ) E^n_{ν,ρ}(−(ct)^ν): the binomial-cascade solution for the
/// power-law forcing t^{ρ−1} (N0 = 1).
pub fn closed_form_cor23(nu: f64, rho: f64, c: f64, n: u32, t: f64) -> Result<f64> {
    positive("rho", rho)?;
    positive("c", c)?;
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if t == 0.0 && rho < 1.0 {
        return Err(Error::Domain(format!("t^(rho-1) is unbounded at t = 0 for rho = {rho}")));
    }
    let p = MLParams::new(nu, rho, n as f64)?;
    Ok(t.powf(rho - 1.0) * gamma(rho) * ml_generalized(&p, -(c * t).powf(nu))?.value)
}

/// Solution for the geometric term list a_r = a^r, ν_r = rν (N0 = 1):
///
/// ```text
/// N = f + f ∗ d/ds E_{μ,1}(q s^μ) − a f ∗ [s^{ν−1} E_{μ,ν}(q s^μ)],  μ = (n+1)ν, q = a^{n+1}
/// ```
pub fn solve_geometric(
    nu: f64,
    a: f64,
    n: u32,
    forcing: &Forcing,
    grid: &TimeGrid,
    _cfg: &SolverConfig,
) -> Result<SampledFunction> {
    positive("nu", nu)?;
    positive("a", a)?;
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    let f = forcing.sample(grid)?;
    let mu = (n + 1) as f64 * nu;
    let q = a.powi(n as i32 + 1);
    let first = singular_convolve(&f, &DerivativeKernel::new(mu, q, 1, grid.t_max())?)?;
    let second = singular_convolve(&f, &MittagLefflerKernel::new(nu, mu, 1.0, q, grid.t_max())?)?;
    f.linear_combination(1.0, &first, 1.0)?.linear_combination(1.0, &second, -a)
}

/// The geometric solution with E_{μ,ν} in place of E_{μ,1} inside the
/// first term, i.e. f/Γ(ν) + f ∗ d/ds E_{μ,ν}(q s^μ) − a f ∗ [s^{ν−1}E_{μ,ν}(q s^μ)].
/// It does not solve the equation; kept as a reference for comparisons.
pub fn solve_geometric_second_index_nu(
    nu: f64,
    a: f64,
    n: u32,
    forcing: &Forcing,
    grid: &TimeGrid,
) -> Result<SampledFunction> {
    positive("nu", nu)?;
    positive("a", a)?;
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    let f = forcing.sample(grid)?;
    let mu = (n + 1) as f64 * nu;
    let q = a.powi(n as i32 + 1);
    // d/ds E_{μ,ν}(q s^μ) = s^{μ−1} Σ_{τ≥1} μτ q^τ s^{μ(τ−1)} / Γ(μτ+ν)
    let cfg = SeriesConfig::default();
    let g = move |s: f64| {
        let w = q * s.powf(mu);
        sum_series(
            |k| {
                let tau = (k + 1) as f64;
                mu * tau * q * w.powi(k as i32) * recip_gamma(mu * tau + nu)
            },
            &cfg,
        )
        .map(|v| v.value)
        .unwrap_or(f64::NAN)
    };
    let first = singular_convolve(&f, &FnKernel::new(mu, g)?)?;
    let second = singular_convolve(&f, &MittagLefflerKernel::new(nu, mu, 1.0, q, grid.t_max())?)?;
    f.scaled(recip_gamma(nu))
        .linear_combination(1.0, &first, 1.0)?
        .linear_combination(1.0, &second, -a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_lists() {
        assert_eq!(binomial_terms(0.5, 4.0, 2), vec![(4.0, 0.5), (4.0, 1.0)]);
        let g = geometric_terms(0.3, 2.0, 3);
        assert_eq!(g.iter().map(|x| x.0).collect::<Vec<_>>(), vec![2.0, 4.0, 8.0]);
        assert!((g[2].1 - 0.9).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_at_simple_points() {
        assert_eq!(closed_form_cor22(0.5, 1.0, 1.0, 1.0, 1, 0.0).unwrap(), 1.0);
        let v = closed_form_cor22(1.0, 1.0, 1.0, 1.0, 0, 0.8).unwrap();
        assert!((v - (-0.8f64).exp()).abs() < 1e-15);
        let v = closed_form_cor23(1.0, 1.0, 1.0, 1, 1.3).unwrap();
        assert!((v - (-1.3f64).exp()).abs() < 1e-15);
        assert!(matches!(closed_form_cor23(0.5, 0.5, 1.0, 1, 0.0), Err(Error::Domain(_))));
    }
}
