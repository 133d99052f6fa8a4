use frackit_core::special_fn::{ml_generalized, MLParams};

use crate::args::MlArgs;
use crate::failure::CliResult;
use crate::output::{flags, Cell, Table};
use crate::settings::Settings;

pub fn run(args: &MlArgs) -> CliResult<()> {
    let s = Settings::load(
        &args.common,
        &[
            ("ml", "beta", &args.beta),
            ("ml", "gamma", &args.gamma),
            ("ml", "delta", &args.delta),
            ("ml", "z", &args.z),
        ],
    )?;
    s.check_keys("ml", &["beta", "gamma", "delta", "z"])?;
    let beta: f64 = s.required("ml", "beta")?;
    let gamma: f64 = s.required("ml", "gamma")?;
    let delta: f64 = s.optional("ml", "delta")?.unwrap_or(1.0);
    let params = MLParams::new(beta, gamma, delta)?;
    let zs = s.list("ml", "z")?;

    let mut table = Table::new(&["z", "value", "err_est", "flags"]);
    let mut flagged = 0;
    for z in zs {
        let v = ml_generalized(&params, z)?;
        flagged += v.cancellation_warning as usize;
        let f = if v.cancellation_warning { vec!["cancellation"] } else { vec![] };
        table.push(vec![Cell::Num(z), Cell::Num(v.value), Cell::Num(v.error_bound()), flags(&f)]);
    }
    let summary = format!("ml: beta={beta}, gamma={gamma}, delta={delta}, {} rows, {flagged} flagged", table.len());
    table.emit(s.output.as_deref(), &summary)
}
