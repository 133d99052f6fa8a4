//! Direct discretization of N(t) + Σ_j a_j I^{ν_j} N(t) = N0 f(t) by
//! product integration and forward substitution.

use super::problem::ReactionProblem;
use crate::error::{Error, Result};
use crate::frac_ops::{ConvolutionWeights, PowerKernel, SampledFunction, TimeGrid};

/// Forward-substitution solver with the integral weights kept for reuse.
pub struct VolterraSolver {
    grid: TimeGrid,
    terms: Vec<(f64, f64)>,
    weights: Vec<ConvolutionWeights>,
}

impl VolterraSolver {
    pub fn new(terms: &[(f64, f64)], grid: &TimeGrid) -> Result<Self> {
        let weights = terms
            .iter()
            .map(|&(_, nu)| ConvolutionWeights::new(grid, &PowerKernel::riemann_liouville(nu)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: grid.clone(),
            terms: terms.to_vec(),
            weights,
        })
    }

    pub fn solve(&self, problem: &ReactionProblem) -> Result<SampledFunction> {
        problem.validate()?;
        if problem.terms != self.terms {
            return Err(Error::invalid("terms", "problem terms differ from the solver's"));
        }
        let f = problem.forcing.sample(&self.grid)?;
        let mut n = vec![0.0; self.grid.len()];
        for i in 0..n.len() {
            let mut rhs = problem.n0 * f.values()[i];
            let mut diag = 1.0;
            for (&(a, _), w) in self.terms.iter().zip(&self.weights) {
                rhs -= a * w.partial(i, &n);
                diag += a * w.diagonal(i);
            }
            if !(diag > 0.0) {
                return Err(Error::SingularSystem { index: i });
            }
            n[i] = rhs / diag;
        }
        SampledFunction::new(self.grid.clone(), n)
    }
}

/// Direct solution of the integral equation on `grid`.
pub fn solve_volterra_direct(problem: &ReactionProblem, grid: &TimeGrid) -> Result<SampledFunction> {
    VolterraSolver::new(&problem.terms, grid)?.solve(problem)
}
