mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};

/// Renormalized volume of almost-Fuchsian manifolds from discrete surface data.
#[derive(Parser, Debug)]
#[command(name = "renvol", version)]
struct Cli {
    /// Flat `key = value` file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a Fuchsian or almost-Fuchsian bundle on a mesh
    Gen(RunArgs),
    /// Canonical renormalized volume and the positivity report
    Volr(RunArgs),
    /// Tables of vol_ks over t and of the funnel integral over z
    Sweep(RunArgs),
    /// Constant-curvature metric in the conformal class of a mesh metric
    Uniformize {
        #[command(flatten)]
        run: RunArgs,
        /// Edge-length overlay JSON; defaults to the embedding metric
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Target curvature, must be negative
        #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
        target: f64,
    },
    /// Full report on the Fuchsian, graded and randomized bundles of a mesh
    Check {
        #[command(flatten)]
        run: RunArgs,
        /// Number of randomized bundles
        #[arg(long)]
        random: Option<usize>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let file = cli.config.as_deref();
    match &cli.command {
        Command::Gen(a) => commands::gen(&RunConfig::resolve(a, file)?),
        Command::Volr(a) => commands::volr(&RunConfig::resolve(a, file)?),
        Command::Sweep(a) => commands::sweep(&RunConfig::resolve(a, file)?),
        Command::Uniformize { run, metric, target } => {
            let cfg = RunConfig::resolve(run, file)?;
            let metric = metric.clone().or(cfg.extra.get("metric").map(PathBuf::from));
            commands::uniformize_cmd(&cfg, metric.as_deref(), *target)
        }
        Command::Check { run, random } => {
            let cfg = RunConfig::resolve(run, file)?;
            let random = match (random, cfg.extra.get("random")) {
                (Some(n), _) => *n,
                (None, Some(v)) => v.parse()?,
                (None, None) => 20,
            };
            commands::check(&cfg, random)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
