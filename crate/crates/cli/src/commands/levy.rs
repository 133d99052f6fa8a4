use frackit_core::diffusion::{levy_density, LevyQuery};
use rayon::prelude::*;

use crate::args::LevyArgs;
use crate::failure::CliResult;
use crate::output::{Cell, Table};
use crate::settings::Settings;

pub fn run(args: &LevyArgs) -> CliResult<()> {
    let s = Settings::load(&args.common, &[("levy", "rho", &args.rho), ("levy", "t", &args.t)])?;
    s.check_keys("levy", &["rho", "t", "t_min", "t_max", "t_points"])?;
    let rho: f64 = s.required("levy", "rho")?;
    let ts = s.list_or_range("levy", "t")?;
    let queries = ts.iter().map(|&t| LevyQuery::new(rho, t)).collect::<frackit_core::Result<Vec<_>>>()?;
    let values = queries
        .par_iter()
        .map(levy_density)
        .collect::<frackit_core::Result<Vec<_>>>()?;

    let mut table = Table::new(&["t", "phi", "err_est"]);
    for (q, v) in queries.iter().zip(&values) {
        table.push(vec![Cell::Num(q.t), Cell::Num(v.value), Cell::Num(v.error_bound())]);
    }
    let summary = format!("levy: rho={rho}, {} rows", table.len());
    table.emit(s.output.as_deref(), &summary)
}
