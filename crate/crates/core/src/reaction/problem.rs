use crate::error::{Error, Result};
use crate::frac_ops::{SampledFunction, TimeGrid};
use crate::special_fn::{gamma, ml_generalized, MLParams, PrabhakarSeries, SeriesConfig};

/// Largest order accepted for a term unless the caller raises it.
pub const DEFAULT_MAX_ORDER: f64 = 10.0;

/// The forcing f(t) of N(t) − N0 f(t) = −Σ a_j I^{ν_j} N(t).
#[derive(Debug, Clone, PartialEq)]
pub enum Forcing {
    /// f ≡ 1.
    Unit,
    /// f(t) = t^{ρ−1}.
    PowerLaw { rho: f64 },
    /// f(t) = t^{γ−1} E^δ_{ν,γ}(−(ct)^ν).
    MittagLeffler { nu: f64, gamma: f64, delta: f64, c: f64 },
    /// Piecewise-linear samples.
    Tabulated(SampledFunction),
}

impl Forcing {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Forcing::Unit | Forcing::Tabulated(_) => Ok(()),
            Forcing::PowerLaw { rho } => {
                if !(rho > 0.0) || !rho.is_finite() {
                    return Err(Error::invalid("rho", format!("must be finite and > 0, got {rho}")));
                }
                Ok(())
            }
            Forcing::MittagLeffler { nu, gamma, delta, c } => {
                for (name, v) in [("nu", nu), ("gamma", gamma), ("delta", delta), ("c", c)] {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
                    }
                }
                Ok(())
            }
        }
    }

    /// Whether f is bounded at t = 0 (sampled solvers need f(0)).
    pub fn is_bounded_at_origin(&self) -> bool {
        match *self {
            Forcing::Unit | Forcing::Tabulated(_) => true,
            Forcing::PowerLaw { rho } => rho >= 1.0,
            Forcing::MittagLeffler { gamma, .. } => gamma >= 1.0,
        }
    }

    /// f(t) for t > 0 (t = 0 allowed when f is bounded there).
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.validate()?;
        if t < 0.0 || (t == 0.0 && !self.is_bounded_at_origin()) {
            return Err(Error::Domain(format!("forcing is not defined at t = {t}")));
        }
        Ok(match self {
            Forcing::Unit => 1.0,
            Forcing::PowerLaw { rho } => t.powf(rho - 1.0),
            Forcing::MittagLeffler { nu, gamma, delta, c } => {
                let p = MLParams::new(*nu, *gamma, *delta)?;
                t.powf(gamma - 1.0) * ml_generalized(&p, -(c * t).powf(*nu))?.value
            }
            Forcing::Tabulated(f) => f.eval(t),
        })
    }

    /// Samples on `grid`. Forcings unbounded at t = 0 are rejected: the
    /// product rules interpolate f linearly from f(0).
    pub fn sample(&self, grid: &TimeGrid) -> Result<SampledFunction> {
        self.validate()?;
        if !self.is_bounded_at_origin() {
            let name = match self {
                Forcing::PowerLaw { .. } => "rho",
                _ => "gamma",
            };
            return Err(Error::invalid(
                name,
                "forcing is unbounded at t = 0; sampled solvers need rho >= 1 (power law) or gamma >= 1 (Mittag-Leffler)",
            ));
        }
        match self {
            Forcing::Unit => SampledFunction::from_fn(grid, |_| 1.0),
            Forcing::PowerLaw { rho } => SampledFunction::from_fn(grid, |t| t.powf(rho - 1.0)),
            Forcing::MittagLeffler { nu, gamma, delta, c } => {
                let p = MLParams::new(*nu, *gamma, *delta)?;
                let series = PrabhakarSeries::new(p, 0, (c * grid.t_max()).powf(*nu));
                let mut values = Vec::with_capacity(grid.len());
                for &t in grid.nodes() {
                    let e = series.eval(-(c * t).powf(*nu))?;
                    values.push(t.powf(gamma - 1.0) * e.value);
                }
                SampledFunction::new(grid.clone(), values)
            }
            Forcing::Tabulated(f) => {
                if f.grid() == grid {
                    Ok(f.clone())
                } else {
                    SampledFunction::from_fn(grid, |t| f.eval(t))
                }
            }
        }
    }

    /// Closed-form Laplace transform f̃(s), or `None` for tabulated data.
    pub fn laplace(&self, s: f64) -> Option<f64> {
        match *self {
            Forcing::Unit => Some(1.0 / s),
            Forcing::PowerLaw { rho } => Some(gamma(rho) * s.powf(-rho)),
            Forcing::MittagLeffler { nu, gamma, delta, c } => {
                Some(s.powf(-gamma) * (1.0 + (c / s).powf(nu)).powf(-delta))
            }
            Forcing::Tabulated(_) => None,
        }
    }
}

/// N(t) − N0 f(t) = −Σ_j a_j I^{ν_j} N(t). The first term is the one whose
/// order appears inside the Mittag-Leffler kernels of the series solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionProblem {
    pub n0: f64,
    pub terms: Vec<(f64, f64)>,
    pub forcing: Forcing,
}

impl ReactionProblem {
    pub fn new(n0: f64, terms: Vec<(f64, f64)>, forcing: Forcing) -> Result<Self> {
        let p = Self { n0, terms, forcing };
        p.validate_with(DEFAULT_MAX_ORDER)?;
        Ok(p)
    }

    pub fn validate_with(&self, max_order: f64) -> Result<()> {
        if !self.n0.is_finite() {
            return Err(Error::invalid("n0", "must be finite"));
        }
        if self.terms.is_empty() {
            return Err(Error::invalid("terms", "at least one (a, nu) pair is required"));
        }
        for &(a, nu) in &self.terms {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::invalid("terms", format!("coefficient a must be finite and > 0, got {a}")));
            }
            if !(nu > 0.0) || !(nu <= max_order) {
                return Err(Error::invalid(
                    "terms",
                    format!("order nu must lie in (0, {max_order}], got {nu}"),
                ));
            }
        }
        self.forcing.validate()
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with(DEFAULT_MAX_ORDER)
    }

    /// 1 + Σ a_j s^{−ν_j}.
    pub fn symbol(&self, s: f64) -> f64 {
        1.0 + self.terms.iter().map(|&(a, nu)| a * s.powf(-nu)).sum::<f64>()
    }
}

/// Truncation and series settings for the series solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Cap on the outer layer index l.
    pub max_layers: usize,
    /// Stop once a whole layer is below `layer_tol`·max|N|.
    pub layer_tol: f64,
    /// Refuse layers with more weak compositions than this.
    pub max_compositions: usize,
    pub series: SeriesConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_layers: 200,
            layer_tol: 1e-13,
            max_compositions: 200_000,
            series: SeriesConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_layers == 0 {
            return Err(Error::invalid("max_layers", "must be >= 1"));
        }
        if !(self.layer_tol > 0.0) {
            return Err(Error::invalid("layer_tol", "must be > 0"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ReactionProblem::new(1.0, vec![], Forcing::Unit).is_err());
        assert!(ReactionProblem::new(1.0, vec![(0.0, 0.5)], Forcing::Unit).is_err());
        assert!(ReactionProblem::new(1.0, vec![(1.0, 0.0)], Forcing::Unit).is_err());
        assert!(ReactionProblem::new(1.0, vec![(1.0, 11.0)], Forcing::Unit).is_err());
        assert!(ReactionProblem::new(1.0, vec![(1.0, 0.5)], Forcing::PowerLaw { rho: -1.0 }).is_err());
        assert!(ReactionProblem::new(1.0, vec![(1.0, 0.5)], Forcing::PowerLaw { rho: 0.5 }).is_ok());
    }

    #[test]
    fn singular_forcing_cannot_be_sampled() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        assert!(Forcing::PowerLaw { rho: 0.5 }.sample(&g).is_err());
        assert!(Forcing::MittagLeffler { nu: 0.5, gamma: 0.9, delta: 1.0, c: 1.0 }.sample(&g).is_err());
        assert!(Forcing::PowerLaw { rho: 1.5 }.sample(&g).is_ok());
    }

    #[test]
    fn ml_forcing_reduces_to_exponential() {
        let f = Forcing::MittagLeffler { nu: 1.0, gamma: 1.0, delta: 1.0, c: 2.0 };
        assert!((f.eval(0.7).unwrap() - (-1.4f64).exp()).abs() < 1e-15);
        let g = TimeGrid::uniform(1.0, 8).unwrap();
        let s = f.sample(&g).unwrap();
        assert!((s.values()[8] - (-2.0f64).exp()).abs() < 1e-15);
    }
}
