//! Solvers for N(t) − N0 f(t) = −Σ_j a_j I^{ν_j} N(t): the layered series
//! solution, closed forms for structured term lists, a direct Volterra
//! discretization used as an oracle, and a Laplace-domain residual.

mod compositions;
mod problem;
mod residual;
mod special;
mod theorem1;
mod volterra;

pub use compositions::{
    composition_count, enumerate_compositions, enumerate_compositions_bounded, Composition,
    DEFAULT_COMPOSITION_BOUND,
};
pub use problem::{Forcing, ReactionProblem, SolverConfig, DEFAULT_MAX_ORDER};
pub use residual::{laplace_domain_residual, laplace_domain_residual_with, substitution_residual, DEFAULT_TAIL_TOL};
pub use special::{
    binomial_terms, closed_form_cor22, closed_form_cor23, geometric_terms, solve_binomial_cascade,
    solve_geometric, solve_geometric_second_index_nu,
};
pub use theorem1::{solve_theorem1, SeriesSolution, Theorem1Solver};
pub use volterra::{solve_volterra_direct, VolterraSolver};
