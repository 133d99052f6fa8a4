use frackit_core::config::ConfigError;
use frackit_core::diffusion::{propagator, propagator_1d_auto, propagator_2d_smallx, DiffusionQuery};
use frackit_core::special_fn::SeriesValue;
use rayon::prelude::*;

use crate::args::DiffusionArgs;
use crate::failure::CliResult;
use crate::output::{flags, Cell, Table};
use crate::settings::Settings;

enum Point {
    Series(SeriesValue),
    /// Small-r asymptote in two dimensions.
    Asymptotic(f64),
}

fn evaluate(dim: u32, alpha: f64, c: f64, x: f64, t: f64) -> frackit_core::Result<Point> {
    match dim {
        1 => propagator_1d_auto(alpha, c, x, t).map(Point::Series),
        2 => propagator_2d_smallx(alpha, c, x.abs(), t).map(Point::Asymptotic),
        _ => propagator(&DiffusionQuery::new(dim, alpha, c, x.abs(), t)?).map(Point::Series),
    }
}

/// Rejects every point the evaluators would refuse, before any work.
fn validate(dim: u32, alpha: f64, c: f64, xs: &[f64], ts: &[f64]) -> CliResult<()> {
    if dim == 0 {
        return Err(ConfigError::value("diffusion.dim", "must be >= 1").into());
    }
    if dim > 2 && dim.is_multiple_of(2) {
        return Err(ConfigError::value("diffusion.dim", "even dimensions other than 2 are not supported").into());
    }
    if dim == 2 && alpha == 1.0 {
        return Err(ConfigError::value("diffusion.alpha", "the two-dimensional asymptote needs alpha < 1").into());
    }
    for &t in ts {
        DiffusionQuery::new(dim, alpha, c, 0.0, t)?;
    }
    for &x in xs {
        if x == 0.0 && dim >= 2 {
            return Err(ConfigError::value("diffusion.x", format!("x = 0 is singular in {dim} dimensions")).into());
        }
    }
    Ok(())
}

pub fn run(args: &DiffusionArgs) -> CliResult<()> {
    let s = Settings::load(
        &args.common,
        &[
            ("diffusion", "dim", &args.dim),
            ("diffusion", "alpha", &args.alpha),
            ("diffusion", "c", &args.c),
            ("diffusion", "x", &args.x),
            ("diffusion", "t", &args.t),
        ],
    )?;
    s.check_keys(
        "diffusion",
        &["dim", "alpha", "c", "x", "x_min", "x_max", "x_points", "t", "t_min", "t_max", "t_points"],
    )?;
    let dim: u32 = s.optional("diffusion", "dim")?.unwrap_or(1);
    let alpha: f64 = s.required("diffusion", "alpha")?;
    let c: f64 = s.optional("diffusion", "c")?.unwrap_or(1.0);
    let xs = s.list_or_range("diffusion", "x")?;
    let ts = s.list_or_range("diffusion", "t")?;
    validate(dim, alpha, c, &xs, &ts)?;

    let cells: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ts.iter().map(move |&t| (x, t))).collect();
    let values = cells
        .par_iter()
        .map(|&(x, t)| evaluate(dim, alpha, c, x, t))
        .collect::<frackit_core::Result<Vec<_>>>()?;

    let mut table = Table::new(&["x", "t", "N", "err_est", "flags"]);
    let mut flagged = 0;
    for (&(x, t), p) in cells.iter().zip(&values) {
        let row = match p {
            Point::Series(v) => {
                let f = if v.cancellation_warning { vec!["cancellation"] } else { vec![] };
                flagged += v.cancellation_warning as usize;
                vec![Cell::Num(x), Cell::Num(t), Cell::Num(v.value), Cell::Num(v.error_bound()), flags(&f)]
            }
            Point::Asymptotic(v) => {
                flagged += 1;
                vec![Cell::Num(x), Cell::Num(t), Cell::Num(*v), Cell::Empty, flags(&["asymptotic"])]
            }
        };
        table.push(row);
    }
    let summary = format!("diffusion: dim={dim}, alpha={alpha}, {} rows, {flagged} flagged", table.len());
    table.emit(s.output.as_deref(), &summary)
}
