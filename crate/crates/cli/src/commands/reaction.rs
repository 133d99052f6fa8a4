use frackit_core::config::{parse_pairs, ConfigError};
use frackit_core::frac_ops::{SampledFunction, TimeGrid};
use frackit_core::reaction::{
    solve_binomial_cascade, solve_geometric, solve_theorem1, solve_volterra_direct, Forcing, ReactionProblem,
    SolverConfig,
};

use crate::args::ReactionArgs;
use crate::failure::CliResult;
use crate::output::{flags, Cell, Table};
use crate::settings::Settings;

/// err_est above this fraction of max|N| marks a row `unresolved`.
const UNRESOLVED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Method {
    Theorem1,
    Cascade { nu: f64, c: f64, n: u32 },
    Geometric { nu: f64, a: f64, n: u32 },
    Volterra,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Theorem1 => "theorem1",
            Method::Cascade { .. } => "cascade",
            Method::Geometric { .. } => "geometric",
            Method::Volterra => "volterra",
        }
    }
}

struct Job {
    method: Method,
    n0: f64,
    /// Term list for theorem1 / volterra.
    problem: Option<ReactionProblem>,
    forcing: Forcing,
    t_max: f64,
    points: usize,
    graded: bool,
    solver: SolverConfig,
}

fn reject(s: &Settings, section: &str, keys: &[&str], why: &str) -> CliResult<()> {
    for k in keys {
        if s.cfg.get(section, k).is_some() {
            return Err(ConfigError::value(format!("{section}.{k}"), why.to_string()).into());
        }
    }
    Ok(())
}

fn forcing(s: &Settings) -> CliResult<Forcing> {
    s.check_keys("forcing", &["rho", "nu", "gamma", "delta", "c"])?;
    let kind = s.optional::<String>("problem", "forcing")?.unwrap_or_else(|| "unit".into());
    let f = match kind.as_str() {
        "unit" => {
            reject(s, "forcing", &["rho", "nu", "gamma", "delta", "c"], "not used by forcing = unit")?;
            Forcing::Unit
        }
        "power" => {
            reject(s, "forcing", &["nu", "gamma", "delta", "c"], "not used by forcing = power")?;
            Forcing::PowerLaw { rho: s.required("forcing", "rho")? }
        }
        "ml" => {
            reject(s, "forcing", &["rho"], "not used by forcing = ml")?;
            Forcing::MittagLeffler {
                nu: s.required("forcing", "nu")?,
                gamma: s.required("forcing", "gamma")?,
                delta: s.optional("forcing", "delta")?.unwrap_or(1.0),
                c: s.required("forcing", "c")?,
            }
        }
        other => {
            return Err(ConfigError::value("problem.forcing", format!("expected unit, power or ml, got `{other}`")).into())
        }
    };
    f.validate()?;
    Ok(f)
}

fn job(s: &Settings) -> CliResult<Job> {
    s.check_keys("problem", &["method", "n0", "terms", "forcing", "nu", "c", "a", "n"])?;
    s.check_keys("grid", &["t_max", "points", "spacing"])?;
    s.check_keys("solver", &["max_layers", "layer_tol", "max_compositions"])?;

    let method_name = s.optional::<String>("problem", "method")?.unwrap_or_else(|| "theorem1".into());
    let method = match method_name.as_str() {
        "theorem1" | "volterra" => {
            reject(s, "problem", &["nu", "c", "a", "n"], "only used by methods cascade and geometric")?;
            if method_name == "theorem1" {
                Method::Theorem1
            } else {
                Method::Volterra
            }
        }
        "cascade" => {
            reject(s, "problem", &["terms", "a"], "not used by method = cascade")?;
            Method::Cascade {
                nu: s.required("problem", "nu")?,
                c: s.required("problem", "c")?,
                n: s.required("problem", "n")?,
            }
        }
        "geometric" => {
            reject(s, "problem", &["terms", "c"], "not used by method = geometric")?;
            Method::Geometric {
                nu: s.required("problem", "nu")?,
                a: s.required("problem", "a")?,
                n: s.required("problem", "n")?,
            }
        }
        other => {
            return Err(ConfigError::value(
                "problem.method",
                format!("expected theorem1, cascade, geometric or volterra, got `{other}`"),
            )
            .into())
        }
    };
    for (key, v) in match method {
        Method::Cascade { nu, c, .. } => vec![("problem.nu", nu), ("problem.c", c)],
        Method::Geometric { nu, a, .. } => vec![("problem.nu", nu), ("problem.a", a)],
        _ => vec![],
    } {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ConfigError::value(key, format!("must be finite and > 0, got {v}")).into());
        }
    }
    if let Method::Cascade { n: 0, .. } | Method::Geometric { n: 0, .. } = method {
        return Err(ConfigError::value("problem.n", "must be >= 1").into());
    }

    let n0: f64 = s.optional("problem", "n0")?.unwrap_or(1.0);
    if !n0.is_finite() {
        return Err(ConfigError::value("problem.n0", "must be finite").into());
    }
    let forcing = forcing(s)?;
    if !forcing.is_bounded_at_origin() {
        return Err(ConfigError::value("forcing", "sampled solvers need a forcing bounded at t = 0").into());
    }
    let problem = match method {
        Method::Theorem1 | Method::Volterra => {
            let raw: String = s.required("problem", "terms")?;
            let terms = parse_pairs(&raw).map_err(|m| ConfigError::value("problem.terms", m))?;
            Some(ReactionProblem::new(n0, terms, forcing.clone())?)
        }
        _ => None,
    };

    let t_max: f64 = s.required("grid", "t_max")?;
    let points: usize = s.required("grid", "points")?;
    if points < 2 {
        return Err(ConfigError::value("grid.points", "must be >= 2").into());
    }
    let graded = match s.optional::<String>("grid", "spacing")?.as_deref() {
        None | Some("graded") => true,
        Some("uniform") => false,
        Some(other) => {
            return Err(ConfigError::value("grid.spacing", format!("expected uniform or graded, got `{other}`")).into())
        }
    };
    let mut solver = SolverConfig::default();
    if let Some(v) = s.optional("solver", "max_layers")? {
        solver.max_layers = v;
    }
    if let Some(v) = s.optional("solver", "layer_tol")? {
        solver.layer_tol = v;
    }
    if let Some(v) = s.optional("solver", "max_compositions")? {
        solver.max_compositions = v;
    }
    solver.validate()?;
    let job = Job { method, n0, problem, forcing, t_max, points, graded, solver };
    job.grid(points)?;
    Ok(job)
}

impl Job {
    fn grid(&self, points: usize) -> frackit_core::Result<TimeGrid> {
        if self.graded {
            TimeGrid::graded(self.t_max, points)
        } else {
            TimeGrid::uniform(self.t_max, points)
        }
    }

    fn solve(&self, grid: &TimeGrid) -> frackit_core::Result<SampledFunction> {
        match (self.method, &self.problem) {
            (Method::Theorem1, Some(p)) => solve_theorem1(p, grid, &self.solver),
            (Method::Volterra, Some(p)) => solve_volterra_direct(p, grid),
            (Method::Cascade { nu, c, n }, _) => {
                Ok(solve_binomial_cascade(nu, c, n, &self.forcing, grid, &self.solver)?.scaled(self.n0))
            }
            (Method::Geometric { nu, a, n }, _) => {
                Ok(solve_geometric(nu, a, n, &self.forcing, grid, &self.solver)?.scaled(self.n0))
            }
            _ => unreachable!("term-list methods always carry a problem"),
        }
    }
}

pub fn run(args: &ReactionArgs) -> CliResult<()> {
    let s = Settings::load(
        &args.common,
        &[
            ("problem", "method", &args.method),
            ("problem", "n0", &args.n0),
            ("problem", "terms", &args.terms),
            ("problem", "forcing", &args.forcing),
            ("grid", "t_max", &args.t_max),
            ("grid", "points", &args.points),
            ("grid", "spacing", &args.spacing),
        ],
    )?;
    let job = job(&s)?;
    let fine_grid = job.grid(job.points)?;
    let fine = job.solve(&fine_grid)?;
    // error estimate: distance to the solution at half the resolution
    let coarse = job.solve(&job.grid(job.points / 2)?)?;
    let scale = fine.max_abs();

    let mut table = Table::new(&["t", "N", "err_est", "flags"]);
    let mut worst = 0.0f64;
    let mut flagged = 0;
    for (&t, &v) in fine.times().iter().zip(fine.values()) {
        let err = (v - coarse.eval(t)).abs();
        worst = worst.max(err);
        let unresolved = err > UNRESOLVED_FRACTION * scale;
        flagged += unresolved as usize;
        let f = if unresolved { vec!["unresolved"] } else { vec![] };
        table.push(vec![Cell::Num(t), Cell::Num(v), Cell::Num(err), flags(&f)]);
    }
    let summary = format!(
        "reaction: method={}, {} rows, max err_est {:.3e}, {} flagged",
        job.method.name(),
        table.len(),
        worst,
        flagged
    );
    table.emit(s.output.as_deref(), &summary)
}
