use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Fractional reaction and diffusion kinetics.
///
/// Every subcommand reads an optional config file (`[section]` headers,
/// `key = value` lines, `#` comments); flags override config keys. CSV goes
/// to stdout unless an output path is given. Set FRACKIT_THREADS to cap
/// parallelism.
#[derive(Debug, Parser)]
#[command(name = "frackit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve N(t) − N0 f(t) = −Σ a_j I^{ν_j} N(t) on a time grid.
    Reaction(ReactionArgs),
    /// Fundamental solution of the time-fractional diffusion equation.
    Diffusion(DiffusionArgs),
    /// One-sided stable density with Laplace transform exp(−u^ρ).
    Levy(LevyArgs),
    /// Generalized Mittag-Leffler function E^δ_{β,γ}(z).
    Ml(MlArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Config file.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Override a config key; repeatable.
    #[arg(short, long = "set", value_name = "SECTION.KEY=VALUE")]
    pub set: Vec<String>,
    /// Write the CSV to this file (default: stdout); overrides output.path.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReactionArgs {
    #[command(flatten)]
    pub common: Common,
    /// theorem1 | cascade | geometric | volterra (problem.method).
    #[arg(long)]
    pub method: Option<String>,
    /// Initial amplitude (problem.n0).
    #[arg(long, allow_hyphen_values = true)]
    pub n0: Option<String>,
    /// Term list "(a, nu), ..." (problem.terms).
    #[arg(long)]
    pub terms: Option<String>,
    /// unit | power | ml (problem.forcing).
    #[arg(long)]
    pub forcing: Option<String>,
    /// End of the time grid (grid.t_max).
    #[arg(long)]
    pub t_max: Option<String>,
    /// Grid resolution, spacing t_max/points (grid.points).
    #[arg(long)]
    pub points: Option<String>,
    /// uniform | graded (grid.spacing).
    #[arg(long)]
    pub spacing: Option<String>,
}

#[derive(Debug, Args)]
pub struct DiffusionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Spatial dimension (diffusion.dim).
    #[arg(long)]
    pub dim: Option<String>,
    /// Time order in (0, 1] (diffusion.alpha).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Diffusivity (diffusion.c).
    #[arg(long)]
    pub c: Option<String>,
    /// Positions, a list (diffusion.x).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Times, a list (diffusion.t).
    #[arg(long)]
    pub t: Option<String>,
}

#[derive(Debug, Args)]
pub struct LevyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Index in (0, 1) (levy.rho).
    #[arg(long)]
    pub rho: Option<String>,
    /// Arguments, a list (levy.t).
    #[arg(long)]
    pub t: Option<String>,
}

#[derive(Debug, Args)]
pub struct MlArgs {
    #[command(flatten)]
    pub common: Common,
    /// ml.beta
    #[arg(long)]
    pub beta: Option<String>,
    /// ml.gamma
    #[arg(long)]
    pub gamma: Option<String>,
    /// ml.delta (default 1)
    #[arg(long)]
    pub delta: Option<String>,
    /// Arguments, a list (ml.z).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these criteria, e.g. "1,9".
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
}
