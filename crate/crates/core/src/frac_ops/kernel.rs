//! Weakly singular convolution kernels k(s) = s^{θ−1}·g(s).

use crate::error::{Error, Result};
use crate::special_fn::{recip_gamma, MLParams, PrabhakarSeries};

/// A kernel k(s) = s^{θ−1} g(s) with θ > 0 and g continuous on [0, T].
///
/// Kernels that know their first two antiderivatives (vanishing at 0) get
/// exact weights on the cells next to the singularity; the others fall back
/// to a linear model of g there.
pub trait SingularKernel: Send + Sync {
    /// θ; must be positive.
    fn exponent(&self) -> f64;

    /// g(s), finite for s ≥ 0.
    fn regular_part(&self, s: f64) -> f64;

    /// k(s) for s > 0.
    fn value(&self, s: f64) -> f64 {
        s.powf(self.exponent() - 1.0) * self.regular_part(s)
    }

    /// (K1(s), K2(s)) with K1' = k, K2' = K1 and K1(0) = K2(0) = 0.
    fn antiderivatives(&self, _s: f64) -> Option<(f64, f64)> {
        None
    }
}

pub(crate) fn check_exponent(theta: f64) -> Result<()> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::NonIntegrableKernel { theta });
    }
    Ok(())
}

/// scale · s^{θ−1}. With scale 1/Γ(θ) this is the Riemann–Liouville kernel.
#[derive(Debug, Clone, Copy)]
pub struct PowerKernel {
    theta: f64,
    scale: f64,
}

impl PowerKernel {
    pub fn new(theta: f64, scale: f64) -> Result<Self> {
        check_exponent(theta)?;
        Ok(Self { theta, scale })
    }

    /// s^{ν−1}/Γ(ν).
    pub fn riemann_liouville(nu: f64) -> Result<Self> {
        check_exponent(nu)?;
        Ok(Self {
            theta: nu,
            scale: recip_gamma(nu),
        })
    }
}

impl SingularKernel for PowerKernel {
    fn exponent(&self) -> f64 {
        self.theta
    }

    fn regular_part(&self, _s: f64) -> f64 {
        self.scale
    }

    fn antiderivatives(&self, s: f64) -> Option<(f64, f64)> {
        let th = self.theta;
        let k1 = self.scale * s.powf(th) / th;
        Some((k1, k1 * s / (th + 1.0)))
    }
}

/// s^{ξ−1} E^δ_{ν,ξ}(λ s^ν), valid for 0 < s ≤ `s_max`.
#[derive(Debug, Clone)]
pub struct MittagLefflerKernel {
    xi: f64,
    nu: f64,
    lambda: f64,
    k0: PrabhakarSeries,
    k1: PrabhakarSeries,
    k2: PrabhakarSeries,
}

impl MittagLefflerKernel {
    pub fn new(xi: f64, nu: f64, delta: f64, lambda: f64, s_max: f64) -> Result<Self> {
        check_exponent(xi)?;
        if !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be finite"));
        }
        let z_max = lambda.abs() * s_max.max(0.0).powf(nu);
        let series = |g: f64| -> Result<PrabhakarSeries> {
            Ok(PrabhakarSeries::new(MLParams::new(nu, g, delta)?, 0, z_max))
        };
        Ok(Self {
            xi,
            nu,
            lambda,
            k0: series(xi)?,
            k1: series(xi + 1.0)?,
            k2: series(xi + 2.0)?,
        })
    }
}

impl SingularKernel for MittagLefflerKernel {
    fn exponent(&self) -> f64 {
        self.xi
    }

    fn regular_part(&self, s: f64) -> f64 {
        self.k0.value(self.lambda * s.powf(self.nu))
    }

    fn antiderivatives(&self, s: f64) -> Option<(f64, f64)> {
        let z = self.lambda * s.powf(self.nu);
        let p = s.powf(self.xi);
        Some((p * self.k1.value(z), p * s * self.k2.value(z)))
    }
}

/// d/ds E^n_{ν,1}(λ s^ν) = Σ_{τ≥1} (n)_τ λ^τ s^{ντ−1} / (τ! Γ(ντ)).
#[derive(Debug, Clone)]
pub struct DerivativeKernel {
    nu: f64,
    lambda: f64,
    k0: PrabhakarSeries,
    k1: PrabhakarSeries,
    k2: PrabhakarSeries,
}

impl DerivativeKernel {
    pub fn new(nu: f64, lambda: f64, n: u32, s_max: f64) -> Result<Self> {
        check_exponent(nu)?;
        if n == 0 {
            return Err(Error::invalid("n", "must be >= 1"));
        }
        if !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be finite"));
        }
        let z_max = lambda.abs() * s_max.max(0.0).powf(nu);
        let series = |g: f64| -> Result<PrabhakarSeries> {
            Ok(PrabhakarSeries::new(MLParams::new(nu, g, n as f64)?, 1, z_max))
        };
        Ok(Self {
            nu,
            lambda,
            k0: series(0.0)?,
            k1: series(1.0)?,
            k2: series(2.0)?,
        })
    }
}

impl SingularKernel for DerivativeKernel {
    fn exponent(&self) -> f64 {
        self.nu
    }

    fn regular_part(&self, s: f64) -> f64 {
        self.lambda * self.k0.value(self.lambda * s.powf(self.nu))
    }

    fn antiderivatives(&self, s: f64) -> Option<(f64, f64)> {
        let w = self.lambda * s.powf(self.nu);
        Some((w * self.k1.value(w), w * s * self.k2.value(w)))
    }
}

/// A kernel given by θ and a closure for g.
pub struct FnKernel<G> {
    theta: f64,
    g: G,
}

impl<G: Fn(f64) -> f64 + Send + Sync> FnKernel<G> {
    pub fn new(theta: f64, g: G) -> Result<Self> {
        check_exponent(theta)?;
        Ok(Self { theta, g })
    }
}

impl<G: Fn(f64) -> f64 + Send + Sync> SingularKernel for FnKernel<G> {
    fn exponent(&self) -> f64 {
        self.theta
    }

    fn regular_part(&self, s: f64) -> f64 {
        (self.g)(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh;
    use crate::special_fn::ml_deriv_kernel;
    use approx::assert_relative_eq;

    fn check_antiderivatives(k: &dyn SingularKernel, s: f64) {
        let (k1, k2) = k.antiderivatives(s).unwrap();
        let q1 = tanh_sinh(|u| k.value(u), 0.0, s, 1e-13).unwrap().value;
        let q2 = tanh_sinh(|u| k.value(u) * (s - u), 0.0, s, 1e-13).unwrap().value;
        assert_relative_eq!(k1, q1, max_relative = 1e-11);
        assert_relative_eq!(k2, q2, max_relative = 1e-11);
    }

    #[test]
    fn antiderivatives_match_quadrature() {
        check_antiderivatives(&PowerKernel::riemann_liouville(0.4).unwrap(), 1.3);
        check_antiderivatives(&MittagLefflerKernel::new(0.7, 0.6, 2.0, -1.0, 2.0).unwrap(), 1.5);
        check_antiderivatives(&MittagLefflerKernel::new(1.8, 0.5, 3.0, -0.5, 2.0).unwrap(), 2.0);
        check_antiderivatives(&DerivativeKernel::new(0.5, -1.0, 2, 2.0).unwrap(), 0.9);
        check_antiderivatives(&DerivativeKernel::new(1.2, 0.7, 1, 2.0).unwrap(), 1.7);
    }

    #[test]
    fn derivative_kernel_matches_special_fn() {
        let k = DerivativeKernel::new(0.5, -1.0, 2, 2.0).unwrap();
        let direct = ml_deriv_kernel(0.5, -1.0, 2, 1.0).unwrap().value;
        assert_relative_eq!(k.value(1.0), direct, max_relative = 1e-14);
    }

    #[test]
    fn exponential_kernel() {
        // s^{0} E_{1,1}(−s) = e^{−s}
        let k = MittagLefflerKernel::new(1.0, 1.0, 1.0, -1.0, 3.0).unwrap();
        assert_relative_eq!(k.value(2.0), (-2.0f64).exp(), max_relative = 1e-14);
        let (k1, _) = k.antiderivatives(2.0).unwrap();
        assert_relative_eq!(k1, 1.0 - (-2.0f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_exponent() {
        assert!(matches!(
            PowerKernel::new(0.0, 1.0),
            Err(Error::NonIntegrableKernel { .. })
        ));
        assert!(FnKernel::new(-0.5, |_| 1.0).is_err());
        assert!(MittagLefflerKernel::new(0.0, 0.5, 1.0, -1.0, 1.0).is_err());
    }
}
