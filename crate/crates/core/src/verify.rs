//! Acceptance checks: each runs a fixed numerical experiment and compares
//! one measured quantity with a pinned tolerance.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::diffusion::{
    h20_12, levy_density, levy_density_series, msd_1d, pde_refinement_study, propagator_1d, propagator_1d_value,
    propagator_2d_smallx, propagator_3d, LevyQuery,
};
use crate::error::Result;
use crate::frac_ops::{SampledFunction, TimeGrid};
use crate::laplace_lab::{laplace_invert, DEFAULT_TALBOT_NODES};
use crate::quad::{exp_sinh, gauss_kronrod};
use crate::reaction::{
    binomial_terms, closed_form_cor22, closed_form_cor23, geometric_terms, laplace_domain_residual_with,
    solve_geometric, solve_geometric_second_index_nu, solve_theorem1, solve_volterra_direct, substitution_residual,
    Forcing, ReactionProblem, SolverConfig,
};
use crate::special_fn::{gamma, ml_generalized, MLParams};

/// How the measured value is compared with `required`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub label: String,
    pub measured: f64,
    pub required: f64,
    pub bound: Bound,
}

impl Measurement {
    fn below(label: impl Into<String>, measured: f64, required: f64) -> Self {
        Self { label: label.into(), measured, required, bound: Bound::Below }
    }

    fn above(label: impl Into<String>, measured: f64, required: f64) -> Self {
        Self { label: label.into(), measured, required, bound: Bound::Above }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Below => self.measured < self.required,
            Bound::Above => self.measured > self.required,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: u32,
    pub name: &'static str,
    /// Err holds the message of a numerical failure inside the check.
    pub outcome: std::result::Result<Vec<Measurement>, String>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(m) if m.iter().all(Measurement::passed))
    }
}

type CheckFn = fn() -> Result<Vec<Measurement>>;

const CHECKS: [(u32, &str, CheckFn); 10] = [
    (1, "Mittag-Leffler forcing closed loop", check_ml_forcing),
    (2, "power-law forcing closed loop", check_power_forcing),
    (3, "layered series vs Volterra oracle", check_series_vs_oracle),
    (4, "geometric closed form", check_geometric),
    (5, "Prabhakar transform pair", check_transform_pair),
    (6, "diffusion Gaussian reductions", check_gaussian),
    (7, "PDE residual refinement", check_pde),
    (8, "one-sided stable density", check_levy),
    (9, "two-dimensional logarithmic law", check_log_law),
    (10, "Bessel-K transform pair", check_bessel_pair),
];

pub fn check_ids() -> impl Iterator<Item = (u32, &'static str)> {
    CHECKS.iter().map(|&(id, name, _)| (id, name))
}

/// Runs the checks whose id is in `only` (all when empty), in id order.
pub fn run_checks(only: &[u32]) -> Vec<CheckReport> {
    CHECKS
        .iter()
        .filter(|(id, _, _)| only.is_empty() || only.contains(id))
        .map(|&(id, name, f)| run_one(id, name, f))
        .collect()
}

fn run_one(id: u32, name: &'static str, f: CheckFn) -> CheckReport {
    let start = Instant::now();
    let outcome = f().map_err(|e| e.to_string());
    CheckReport { id, name, outcome, elapsed: start.elapsed() }
}

const H: f64 = 1.0 / 1024.0;
const T_END: f64 = 2.0;

fn reaction_grid() -> Result<TimeGrid> {
    TimeGrid::graded(T_END, (T_END / H) as usize)
}

/// max |a − b| / max |b| over nodes t ≥ h.
fn normwise(a: &SampledFunction, b: &[f64]) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for (&t, (x, y)) in a.times().iter().zip(a.values().iter().zip(b)) {
        if t >= H * (1.0 - 1e-12) {
            diff = diff.max((x - y).abs());
            scale = scale.max(y.abs());
        }
    }
    diff / scale
}

fn check_ml_forcing() -> Result<Vec<Measurement>> {
    let g = reaction_grid()?;
    let mut out = Vec::new();
    for (nu, gam, delta, c, n) in [(0.5, 1.0, 1.0, 1.0, 1), (0.8, 1.2, 2.0, 0.7, 2)] {
        let f = Forcing::MittagLeffler { nu, gamma: gam, delta, c };
        let p = ReactionProblem::new(1.0, binomial_terms(nu, c, n), f)?;
        let direct = solve_volterra_direct(&p, &g)?;
        let exact = g.nodes().iter().map(|&t| closed_form_cor22(nu, gam, delta, c, n, t)).collect::<Result<Vec<_>>>()?;
        out.push(Measurement::below(format!("nu={nu} gamma={gam} delta={delta} c={c} n={n}"), normwise(&direct, &exact), 1e-4));
    }
    Ok(out)
}

fn check_power_forcing() -> Result<Vec<Measurement>> {
    let g = reaction_grid()?;
    let mut out = Vec::new();
    for (nu, rho, c, n) in [(0.5, 1.0, 1.0, 1), (0.6, 1.5, 1.0, 2)] {
        let p = ReactionProblem::new(1.0, binomial_terms(nu, c, n), Forcing::PowerLaw { rho })?;
        let direct = solve_volterra_direct(&p, &g)?;
        let exact = g.nodes().iter().map(|&t| closed_form_cor23(nu, rho, c, n, t)).collect::<Result<Vec<_>>>()?;
        out.push(Measurement::below(format!("nu={nu} rho={rho} c={c} n={n}"), normwise(&direct, &exact), 1e-4));
    }
    Ok(out)
}

fn check_series_vs_oracle() -> Result<Vec<Measurement>> {
    let g = reaction_grid()?;
    // long enough that e^{−sT}|N(T)| is negligible at s = 2
    let long = TimeGrid::graded(7.0, 7 * 256)?;
    let cfg = SolverConfig::default();
    let term_lists = [vec![(1.0, 0.6), (0.5, 0.9)], vec![(1.0, 0.5), (0.4, 0.7), (0.2, 1.1)]];
    let mut out = Vec::new();
    for terms in term_lists {
        for (fname, f) in [("unit", Forcing::Unit), ("t^0.5", Forcing::PowerLaw { rho: 1.5 })] {
            let p = ReactionProblem::new(1.0, terms.clone(), f)?;
            let series = solve_theorem1(&p, &g, &cfg)?;
            let direct = solve_volterra_direct(&p, &g)?;
            let label = format!("{} terms, f={fname}", terms.len());
            out.push(Measurement::below(format!("{label}: vs oracle"), normwise(&series, direct.values()), 1e-4));
            let n = solve_theorem1(&p, &long, &cfg)?;
            let r = laplace_domain_residual_with(&p, &n, &[2.0, 5.0, 10.0], 1e-6)?;
            out.push(Measurement::below(format!("{label}: transform residual"), r.iter().cloned().fold(0.0, f64::max), 1e-4));
        }
    }
    Ok(out)
}

fn check_geometric() -> Result<Vec<Measurement>> {
    let g = reaction_grid()?;
    let (nu, a, n) = (0.6, 0.8, 2);
    let p = ReactionProblem::new(1.0, geometric_terms(nu, a, n), Forcing::Unit)?;
    let direct = solve_volterra_direct(&p, &g)?;
    let closed = solve_geometric(nu, a, n, &Forcing::Unit, &g, &SolverConfig::default())?;
    let printed = solve_geometric_second_index_nu(nu, a, n, &Forcing::Unit, &g)?;
    Ok(vec![
        Measurement::below("derived form vs oracle", normwise(&closed, direct.values()), 1e-4),
        Measurement::above("second index nu: residual", substitution_residual(&p, &printed, H)?, 1e-2),
    ])
}

fn check_transform_pair() -> Result<Vec<Measurement>> {
    let mut worst = 0.0f64;
    for a in [-0.5, -1.0] {
        for beta in [0.5, 0.8] {
            for gam in [0.7, 1.5] {
                for delta in [1.0, 2.0] {
                    let p = MLParams::new(beta, gam, delta)?;
                    let big_f = |s: Complex64| s.powf(-gam) * (1.0 - a * s.powf(-beta)).powf(-delta);
                    for t in [0.5, 1.0, 2.0] {
                        let inv = laplace_invert(big_f, t, DEFAULT_TALBOT_NODES)?;
                        let exact = t.powf(gam - 1.0) * ml_generalized(&p, a * t.powf(beta))?.value;
                        worst = worst.max(((inv - exact) / exact).abs());
                    }
                }
            }
        }
    }
    Ok(vec![Measurement::below("16 parameter sets, t in {0.5, 1, 2}", worst, 1e-6)])
}

fn heat_kernel(n: i32, c: f64, r: f64, t: f64) -> f64 {
    (4.0 * PI * c * t).powf(-n as f64 / 2.0) * (-r * r / (4.0 * c * t)).exp()
}

fn check_gaussian() -> Result<Vec<Measurement>> {
    let mut worst1 = 0.0f64;
    let mut worst3 = 0.0f64;
    for c in [1.0, 2.5] {
        for t in [0.5, 1.0, 2.0] {
            for k in 0..=40 {
                let r = (10.0 * k as f64 / 40.0 * c * t).sqrt();
                worst1 = worst1.max((propagator_1d(1.0, c, r, t)?.value / heat_kernel(1, c, r, t) - 1.0).abs());
                if r > 0.0 {
                    worst3 = worst3.max((propagator_3d(1.0, c, r, t)?.value / heat_kernel(3, c, r, t) - 1.0).abs());
                }
            }
        }
    }
    let mut out = vec![
        Measurement::below("n=1 heat kernel, A <= 10", worst1, 1e-10),
        Measurement::below("n=3 heat kernel, A <= 10", worst3, 1e-10),
    ];
    for alpha in [0.5, 0.75, 1.0] {
        let moment = |k: i32| -> Result<f64> {
            let mut failure = None;
            let v = exp_sinh(
                |x| match propagator_1d_value(alpha, 1.0, x, 1.0) {
                    Ok(n) => x.powi(k) * n,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                1e-12,
            )?;
            match failure {
                Some(e) => Err(e),
                None => Ok(2.0 * v.value),
            }
        };
        out.push(Measurement::below(format!("alpha={alpha}: |mass - 1|"), (moment(0)? - 1.0).abs(), 1e-6));
        let msd = msd_1d(alpha, 1.0, 1.0)?;
        out.push(Measurement::below(format!("alpha={alpha}: msd quadrature"), (moment(2)? / msd - 1.0).abs(), 1e-4));
    }
    Ok(out)
}

fn check_pde() -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for alpha in [1.0, 0.5] {
        let [coarse, fine] = pde_refinement_study(alpha, 1.0, 3.0, 0.5, 1.0, 1.0 / 128.0)?;
        out.push(Measurement::below(format!("alpha={alpha}: residual(h/2) / residual(h)"), fine / coarse, 1.0));
        out.push(Measurement::below(format!("alpha={alpha}: residual at h=1/256"), fine, 5e-3));
    }
    Ok(out)
}

fn check_levy() -> Result<Vec<Measurement>> {
    let mut worst_laplace = 0.0f64;
    let mut out = Vec::new();
    for rho in [0.3, 0.5, 0.7] {
        let phi = |t: f64| LevyQuery::new(rho, t).and_then(|q| levy_density(&q)).map_or(f64::NAN, |v| v.value);
        for u in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let v = exp_sinh(|t| (-u * t).exp() * phi(t), 0.0, 1e-12)?.value;
            worst_laplace = worst_laplace.max((v - (-u.powf(rho)).exp()).abs());
        }
        let mass = exp_sinh(phi, 0.0, 1e-12)?.value;
        out.push(Measurement::below(format!("rho={rho}: |mass - 1|"), (mass - 1.0).abs(), 1e-5));
    }
    out.insert(0, Measurement::below("Laplace identity, u in [0.1, 10]", worst_laplace, 1e-5));
    let mut worst_half = 0.0f64;
    for k in 0..=200 {
        let t = 0.05 * 200f64.powf(k as f64 / 200.0);
        let exact = t.powf(-1.5) * (-0.25 / t).exp() / (2.0 * PI.sqrt());
        worst_half = worst_half.max((levy_density_series(0.5, t)?.value / exact - 1.0).abs());
    }
    out.insert(1, Measurement::below("rho=0.5 series vs elementary, t in [0.05, 10]", worst_half, 1e-8));
    Ok(out)
}

fn check_log_law() -> Result<Vec<Measurement>> {
    let mut worst_step = 0.0f64;
    let mut worst_formula = 0.0f64;
    for alpha in [0.3, 0.5, 0.9] {
        for t in [0.5f64, 2.0] {
            let step = LN_2 / (PI * gamma(1.0 - alpha) * t.powf(alpha));
            for x in [1e-3, 0.1, 0.4] {
                let v = propagator_2d_smallx(alpha, 1.0, x, t)?;
                let d = propagator_2d_smallx(alpha, 1.0, x / 2.0, t)? - v;
                worst_step = worst_step.max((d / step - 1.0).abs());
                let printed = (t.powf(alpha / 2.0) / x).ln() / (PI * gamma(1.0 - alpha) * t.powf(alpha));
                worst_formula = worst_formula.max((v - printed).abs());
            }
        }
    }
    Ok(vec![
        Measurement::below("halving step vs ln2/(pi Gamma(1-alpha) t^alpha)", worst_step, 1e-12),
        // identical arithmetic, so any difference at all is a failure
        Measurement::below("deviation from the closed formula", worst_formula, f64::MIN_POSITIVE),
    ])
}

fn check_bessel_pair() -> Result<Vec<Measurement>> {
    // f(t) = ½ H^{2,0}_{1,2}[1/(4t) | (1,1); (1/4,1), (−1/4,1)] has transform
    // s^{−1} K_{1/2}(s^{1/2}); f ≥ 0 is increasing near 0, so the neglected
    // head ∫_0^{t0} is below t0 f(t0)
    let f = |t: f64| 0.5 * h20_12(0.25 / t, 1.0, 1.0, 0.25, -0.25).map_or(f64::NAN, |v| v.value);
    let t0 = 0.02;
    let mut out = Vec::new();
    for s in [1.0f64, 2.0, 4.0] {
        let k_half = (PI / (2.0 * s.sqrt())).sqrt() * (-s.sqrt()).exp();
        let exact = k_half / s;
        let body = gauss_kronrod(|t| (-s * t).exp() * f(t), t0, 1.0, 0.0, 1e-13)?.value
            + exp_sinh(|t| (-s * t).exp() * f(t), 1.0, 1e-13)?.value;
        let err = ((body - exact).abs() + t0 * f(t0)) / exact;
        out.push(Measurement::below(format!("s={s}: relative error incl. head bound"), err, 1e-5));
    }
    Ok(out)
}
