use super::problem::{Forcing, ReactionProblem};
use crate::error::{Error, Result};
use crate::frac_ops::{rl_integral_sampled, SampledFunction};
use crate::laplace_lab::laplace_forward_sampled;

/// Default bound on the neglected transform tail beyond the last node.
pub const DEFAULT_TAIL_TOL: f64 = 1e-7;

/// |Ñ(s)(1 + Σ a_j s^{−ν_j}) − N0 f̃(s)| for each s, with Ñ the exact
/// transform of the piecewise-linear solution on [0, T].
pub fn laplace_domain_residual(problem: &ReactionProblem, solution: &SampledFunction, s_values: &[f64]) -> Result<Vec<f64>> {
    laplace_domain_residual_with(problem, solution, s_values, DEFAULT_TAIL_TOL)
}

pub fn laplace_domain_residual_with(
    problem: &ReactionProblem,
    solution: &SampledFunction,
    s_values: &[f64],
    tail_tol: f64,
) -> Result<Vec<f64>> {
    problem.validate()?;
    s_values
        .iter()
        .map(|&s| {
            let n_hat = laplace_forward_sampled(solution, s, tail_tol)?.value;
            let f_hat = match &problem.forcing {
                Forcing::Tabulated(f) => laplace_forward_sampled(f, s, tail_tol)?.value,
                other => other
                    .laplace(s)
                    .ok_or_else(|| Error::Domain("forcing has no transform".into()))?,
            };
            Ok((n_hat * problem.symbol(s) - problem.n0 * f_hat).abs())
        })
        .collect()
}

/// max over nodes t ≥ `t_from` of |N − N0 f + Σ a_j I^{ν_j} N|, divided by
/// max|N|, with the integrals taken by the product rule on the solution's
/// grid.
pub fn substitution_residual(problem: &ReactionProblem, solution: &SampledFunction, t_from: f64) -> Result<f64> {
    problem.validate()?;
    let f = problem.forcing.sample(solution.grid())?;
    let mut lhs: Vec<f64> = solution
        .values()
        .iter()
        .zip(f.values())
        .map(|(n, f)| n - problem.n0 * f)
        .collect();
    for &(a, nu) in &problem.terms {
        let integral = rl_integral_sampled(nu, solution)?;
        for (l, v) in lhs.iter_mut().zip(integral.values()) {
            *l += a * v;
        }
    }
    let scale = solution.max_abs();
    if scale == 0.0 {
        return Ok(lhs.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    Ok(solution
        .times()
        .iter()
        .zip(&lhs)
        .filter(|(&t, _)| t >= t_from)
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()))
        / scale)
}
