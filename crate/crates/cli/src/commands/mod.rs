mod diffusion;
mod levy;
mod ml;
mod reaction;
mod verify;

use crate::args::{Cli, Command};
use crate::failure::{CliResult, Failure};

/// FRACKIT_THREADS caps the rayon pool; unset or 0 leaves it automatic.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("FRACKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("FRACKIT_THREADS: expected a nonnegative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("FRACKIT_THREADS: {e}")))?;
    }
    Ok(())
}

/// Returns the process exit code on success.
pub fn run(cli: Cli) -> CliResult<u8> {
    configure_threads()?;
    match cli.command {
        Command::Reaction(a) => reaction::run(&a).map(|()| 0),
        Command::Diffusion(a) => diffusion::run(&a).map(|()| 0),
        Command::Levy(a) => levy::run(&a).map(|()| 0),
        Command::Ml(a) => ml::run(&a).map(|()| 0),
        Command::Verify(a) => verify::run(&a),
    }
}
