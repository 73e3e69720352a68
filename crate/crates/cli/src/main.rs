//! `meta-inf` — simulate Meta-INF and its baselines from a TOML config.
//!
//! Exit codes: 0 success, 1 `validate` found the parameters infeasible, 2 configuration error,
//! 3 numerical failure, 4 output could not be written.

mod commands;
mod config_io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "meta-inf", version, about = "Meta-learning for adversarial bandits: simulations and bounds")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Experiment config (TOML).
    #[arg(long, short)]
    pub config: PathBuf,
    /// Output directory for CSV files.
    #[arg(long, short, default_value = "out")]
    pub out: PathBuf,
    /// Override a config value, e.g. `run.seeds=1,2,3` or `delta=0.02` (repeatable).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write every per-round decision vector to decisions.csv.
    #[arg(long)]
    pub record_decisions: bool,
    /// Overrides the master seed of the config.
    #[arg(long, env = "MB_SEED", hide_env_values = true)]
    pub master_seed: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Run the configured algorithms over all seeds and write CSVs.
    Run(Common),
    /// Evaluate the regret guarantee for the configured prior.
    Bound(Common),
    /// Measure best-arm identification of the inner learner.
    Identify(Common),
    /// Run every algorithm on the same loss streams and compare.
    Compare(Common),
    /// Check parameter feasibility and print the fully defaulted config.
    Validate(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, common): (fn(&Common) -> commands::Outcome, &Common) = match &cli.verb {
        Verb::Run(c) => (commands::run, c),
        Verb::Bound(c) => (commands::bound, c),
        Verb::Identify(c) => (commands::identify, c),
        Verb::Compare(c) => (commands::compare, c),
        Verb::Validate(c) => (commands::validate, c),
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match verb(common) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
