//! Configuration files, result files and command dispatch for the
//! `malkin-cylinder` binary.
//!
//! Exit codes: 0 on success, 2 when `M` is identically zero, 1 on a
//! validation or numerical failure.

pub mod commands;
pub mod config;
pub mod output;


use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_check, cmd_malkin, cmd_tables, cmd_verify, Outcome, EXIT_DEGENERATE, EXIT_FAILURE, EXIT_OK};
pub use config::{Monomial, RunConfig, RunMode};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "malkin-cylinder", version, about = "Limit cycles from a non-smooth perturbation of a cylinder of periodic orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory, overriding `output_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum)]
    pub mode: Option<RunMode>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Admissibility of h.
    Check,
    /// Coefficients, simple roots and a sampled curve of M.
    Malkin,
    /// Newton on the return map near each root, for each epsilon.
    Verify,
    /// Generic upper bounds on the number of cycles over (n, p) <= m.
    Tables,
}

impl Cli {
    /// The configuration file with command-line overrides applied.
    pub fn load_config(&self) -> Result<RunConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| Error::invalid("--config", "a configuration file is required"))?;
        let mut cfg = RunConfig::load(path)?;
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(mode) = self.mode {
            cfg.mode = mode;
        }
        if let Some(delta) = self.delta {
            cfg.delta = delta;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Check => cmd_check(cfg),
        Command::Malkin => cmd_malkin(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Tables => cmd_tables(cfg),
    }
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match cli.load_config().and_then(|cfg| dispatch(cli.command, &cfg)) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}
