//! Series solution of N(t) − N0 f(t) = −Σ_j a_j I^{ν_j} N(t):
//!
//! ```text
//! N = N0 Σ_{l≥0} (−1)^l Σ_{|r|=l} l!/∏r_μ! ∏ a_{μ+1}^{r_μ}
//!         · f ∗ [s^{ξ−1} E^{l+1}_{ν_1,ξ}(−a_1 s^{ν_1})],   ξ = Σ ν_{μ+1} r_μ
//! ```
//!
//! The l = 0 kernel (ξ = 0) is a delta plus d/ds E_{ν_1}(−a_1 s^{ν_1}), so
//! that layer is f + f ∗ (derivative kernel).

use std::sync::Arc;

use rayon::prelude::*;

use super::compositions::enumerate_compositions_bounded;
use super::problem::{ReactionProblem, SolverConfig};
use crate::error::{Error, Result};
use crate::frac_ops::{ConvolutionWeights, DerivativeKernel, MittagLefflerKernel, SampledFunction, SingularKernel, TimeGrid};

/// Σ_r c_r s^{ξ_r−1} E^{l+1}_{ν,ξ_r}(λ s^ν): one whole layer as one kernel.
struct LayerKernel {
    theta: f64,
    parts: Vec<(f64, MittagLefflerKernel)>,
}

impl SingularKernel for LayerKernel {
    fn exponent(&self) -> f64 {
        self.theta
    }

    fn regular_part(&self, s: f64) -> f64 {
        self.value(s) * s.powf(1.0 - self.theta)
    }

    fn value(&self, s: f64) -> f64 {
        self.parts.iter().map(|(c, k)| c * k.value(s)).sum()
    }

    fn antiderivatives(&self, s: f64) -> Option<(f64, f64)> {
        let mut out = (0.0, 0.0);
        for (c, k) in &self.parts {
            let (k1, k2) = k.antiderivatives(s)?;
            out.0 += c * k1;
            out.1 += c * k2;
        }
        Some(out)
    }
}

/// (ξ, coefficient) pairs of layer l, with equal exponents merged.
pub(crate) fn layer_terms(terms: &[(f64, f64)], l: u32, bound: usize) -> Result<Vec<(f64, f64)>> {
    let rest = &terms[1..];
    let comps = enumerate_compositions_bounded(l, rest.len() as u32, bound)?;
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut pairs: Vec<(f64, f64)> = comps
        .iter()
        .map(|c| {
            let mut xi = 0.0;
            let mut coef = sign * c.weight;
            for (&r, &(a, nu)) in c.parts.iter().zip(rest) {
                xi += nu * r as f64;
                coef *= a.powi(r as i32);
            }
            (xi, coef)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
    for (xi, c) in pairs {
        match merged.last_mut() {
            Some(last) if (xi - last.0).abs() <= 1e-12 * xi.max(1.0) => last.1 += c,
            _ => merged.push((xi, c)),
        }
    }
    Ok(merged)
}

/// Outcome of a series solve.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub solution: SampledFunction,
    /// Number of layers l ≥ 1 that were added.
    pub layers: usize,
    /// max |contribution| of the last layer added (0 for a single term).
    pub last_layer: f64,
}

/// Theorem-1 solver bound to a set of terms and a grid. Layer weights are
/// built on demand and kept, so several forcings can share them.
pub struct Theorem1Solver {
    terms: Vec<(f64, f64)>,
    grid: TimeGrid,
    cfg: SolverConfig,
    base: ConvolutionWeights,
    layers: Vec<Arc<ConvolutionWeights>>,
}

impl Theorem1Solver {
    pub fn new(terms: &[(f64, f64)], grid: &TimeGrid, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        ReactionProblem {
            n0: 1.0,
            terms: terms.to_vec(),
            forcing: super::Forcing::Unit,
        }
        .validate()?;
        let (a1, nu1) = terms[0];
        let base = ConvolutionWeights::new(grid, &DerivativeKernel::new(nu1, -a1, 1, grid.t_max())?)?;
        Ok(Self {
            terms: terms.to_vec(),
            grid: grid.clone(),
            cfg: *cfg,
            base,
            layers: Vec::new(),
        })
    }

    fn layer(&mut self, l: usize) -> Result<Arc<ConvolutionWeights>> {
        while self.layers.len() < l {
            let next = self.layers.len() as u32 + 1;
            let (a1, nu1) = self.terms[0];
            let t_max = self.grid.t_max();
            let pairs = layer_terms(&self.terms, next, self.cfg.max_compositions)?;
            let parts = pairs
                .par_iter()
                .map(|&(xi, c)| Ok((c, MittagLefflerKernel::new(xi, nu1, next as f64 + 1.0, -a1, t_max)?)))
                .collect::<Result<Vec<_>>>()?;
            let kernel = LayerKernel {
                theta: pairs[0].0,
                parts,
            };
            self.layers.push(Arc::new(ConvolutionWeights::new(&self.grid, &kernel)?));
        }
        Ok(self.layers[l - 1].clone())
    }

    pub fn solve(&mut self, problem: &ReactionProblem) -> Result<SeriesSolution> {
        problem.validate()?;
        if problem.terms != self.terms {
            return Err(Error::invalid("terms", "problem terms differ from the solver's"));
        }
        let f = problem.forcing.sample(&self.grid)?;
        let fv = f.values();
        let conv = self.base.apply(fv);
        let mut running: Vec<f64> = fv.iter().zip(&conv).map(|(a, b)| a + b).collect();
        let mut layers = 0;
        let mut last_layer = 0.0;
        if self.terms.len() > 1 {
            let mut prev = f64::INFINITY;
            let mut growing = 0;
            let mut converged = false;
            for l in 1..=self.cfg.max_layers {
                let w = self.layer(l)?;
                let layer = w.apply(fv);
                let size = layer.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (r, v) in running.iter_mut().zip(&layer) {
                    *r += v;
                }
                layers = l;
                last_layer = size;
                if !size.is_finite() {
                    return Err(Error::KernelEvaluation(format!("layer {l} is not finite")));
                }
                let scale = running.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if size <= self.cfg.layer_tol * scale {
                    converged = true;
                    break;
                }
                if size >= prev {
                    growing += 1;
                    if growing >= 3 {
                        let partial = scaled(&self.grid, &running, problem.n0);
                        return Err(Error::Diverged {
                            layer: l,
                            partial: Box::new(partial),
                        });
                    }
                } else {
                    growing = 0;
                }
                prev = size;
            }
            if !converged {
                return Err(Error::LayersExhausted {
                    layers,
                    partial: Box::new(scaled(&self.grid, &running, problem.n0)),
                });
            }
        }
        let solution = SampledFunction::new(self.grid.clone(), running.iter().map(|v| v * problem.n0).collect())?;
        Ok(SeriesSolution {
            solution,
            layers,
            last_layer: last_layer * problem.n0.abs(),
        })
    }
}

fn scaled(grid: &TimeGrid, values: &[f64], n0: f64) -> SampledFunction {
    SampledFunction::from_parts(grid.clone(), values.iter().map(|v| v * n0).collect())
}

/// Series solution on `grid`; see [`Theorem1Solver`] to reuse weights.
pub fn solve_theorem1(problem: &ReactionProblem, grid: &TimeGrid, cfg: &SolverConfig) -> Result<SampledFunction> {
    Ok(Theorem1Solver::new(&problem.terms, grid, cfg)?.solve(problem)?.solution)
}
