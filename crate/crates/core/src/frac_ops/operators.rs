//! Riemann–Liouville integral, Caputo derivative and general singular
//! convolution on sampled data.

use rayon::prelude::*;

use super::convolution::ConvolutionWeights;
use super::grid::{SampledFunction, TimeGrid};
use super::kernel::{check_exponent, PowerKernel, SingularKernel};
use crate::error::{Error, Result};
use crate::special_fn::{ln_gamma, recip_gamma};

/// I^ν[u^{ρ−1}](t) = Γ(ρ)/Γ(ρ+ν) · t^{ρ+ν−1}. ν = 0 returns t^{ρ−1}.
pub fn rl_integral_power(nu: f64, rho: f64, t: f64) -> f64 {
    (ln_gamma(rho) - ln_gamma(rho + nu)).exp() * t.powf(rho + nu - 1.0)
}

/// Riemann–Liouville integral of order ν of piecewise-linear data; node 0
/// maps to 0.
pub fn rl_integral_sampled(nu: f64, f: &SampledFunction) -> Result<SampledFunction> {
    let kernel = PowerKernel::riemann_liouville(nu)?;
    ConvolutionWeights::new(f.grid(), &kernel)?.convolve(f)
}

/// ∫_0^t k(t − u) f(u) du on the grid of `f`.
pub fn singular_convolve(f: &SampledFunction, kernel: &dyn SingularKernel) -> Result<SampledFunction> {
    check_exponent(kernel.exponent())?;
    ConvolutionWeights::new(f.grid(), kernel)?.convolve(f)
}

/// Caputo derivative of order α ∈ (0, 1) in the form I^{1−α}[f′] with f′
/// piecewise constant (the L1 rule). Exact for linear f.
pub fn caputo_derivative_sampled(alpha: f64, f: &SampledFunction) -> Result<SampledFunction> {
    CaputoOperator::new(f.grid(), alpha)?.apply(f)
}

/// The L1 Caputo rule bound to a grid, for repeated application.
#[derive(Debug, Clone)]
pub struct CaputoOperator {
    grid: TimeGrid,
    alpha: f64,
    scale: f64,
}

impl CaputoOperator {
    pub fn new(grid: &TimeGrid, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        Ok(Self {
            grid: grid.clone(),
            alpha,
            scale: recip_gamma(2.0 - alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Derivative at node i from nodal values.
    pub fn at(&self, i: usize, values: &[f64]) -> f64 {
        let t = self.grid.nodes();
        let p = 1.0 - self.alpha;
        let mut acc = 0.0;
        let mut upper = (t[i] - t[0]).powf(p);
        for k in 0..i {
            let lower = (t[i] - t[k + 1]).powf(p);
            acc += (values[k + 1] - values[k]) / (t[k + 1] - t[k]) * (upper - lower);
            upper = lower;
        }
        acc * self.scale
    }

    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.grid.len(), "value count must match the grid");
        (0..values.len()).into_par_iter().map(|i| self.at(i, values)).collect()
    }

    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        if f.grid() != &self.grid {
            return Err(Error::InvalidGrid("function and operator use different grids".into()));
        }
        Ok(SampledFunction::from_parts(self.grid.clone(), self.apply_values(f.values())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_rule_values() {
        assert_relative_eq!(rl_integral_power(0.5, 1.0, 1.0), 2.0 / std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(rl_integral_power(1.0, 2.0, 2.0), 2.0, max_relative = 1e-14);
        assert_relative_eq!(rl_integral_power(0.0, 2.5, 1.7), 1.7f64.powf(1.5), max_relative = 1e-14);
    }

    #[test]
    fn caputo_of_linear_is_exact() {
        let g = TimeGrid::graded(1.0, 64).unwrap();
        let f = SampledFunction::from_fn(&g, |t| 3.0 * t).unwrap();
        let d = caputo_derivative_sampled(0.5, &f).unwrap();
        for (&t, &v) in g.nodes().iter().zip(d.values()).skip(1) {
            assert_relative_eq!(v, 3.0 * t.sqrt() / 0.886_226_925_452_758, max_relative = 1e-12);
        }
        let c = SampledFunction::from_fn(&g, |_| 2.5).unwrap();
        assert!(caputo_derivative_sampled(0.5, &c).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn caputo_rejects_bad_order() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        let f = SampledFunction::zeros(&g);
        assert!(caputo_derivative_sampled(1.0, &f).is_err());
        assert!(caputo_derivative_sampled(0.0, &f).is_err());
    }
}
