//! Command-line driver: config files in, CSV and JSON artifacts out.
//!
//! Subcommands `simulate`, `compare`, `stability`, `deriv` (alias `dini`)
//! and `eval`. Exit codes: 0 success, 1 a run failed or a property was
//! violated, 2 invalid configuration or failed hypothesis gate.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod problem;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ftl_core::hybrid::StepMode;
use ftl_core::stability::ShapeFamily;

pub use commands::Failure;
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "ftl", version, about = "Hybrid fuzzy systems on time scales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the hybrid fuzzy system and write trajectory.csv.
    Simulate(RunArgs),
    /// Solve the fuzzy and comparison systems side by side and write comparison.csv.
    Compare(RunArgs),
    /// Sample the practical-stability properties and write verdict.json.
    Stability(RunArgs),
    /// Write the delta-Hukuhara derivative of the solution to derivative.csv.
    #[command(alias = "dini")]
    Deriv(RunArgs),
    /// Parse and evaluate one DSL expression.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
}

/// Flags shared by the run commands. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Built-in system name.
    #[arg(long, value_name = "NAME")]
    pub system: Option<String>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "N")]
    pub samples: Option<usize>,
    #[arg(long, value_name = "FAMILY")]
    pub family: Option<ShapeFamily>,
    #[arg(long, value_name = "M")]
    pub alpha_levels: Option<usize>,
    #[arg(long, value_name = "expansive|contractive")]
    pub mode: Option<StepMode>,
    #[arg(long, value_name = "T", allow_negative_numbers = true)]
    pub horizon: Option<f64>,
    /// Time scale, e.g. `integer(20)` or `qscale(1, 2, 6)`.
    #[arg(long, value_name = "SPEC")]
    pub timescale: Option<String>,
    /// Initial state, one fuzzy expression per component (repeatable).
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub u0: Vec<String>,
}

impl RunArgs {
    pub fn to_config(&self) -> RunConfig {
        let mut c = RunConfig::default();
        c.system.catalog = self.system.clone();
        c.system.timescale = self.timescale.clone();
        c.system.u0 = (!self.u0.is_empty()).then(|| self.u0.clone());
        c.solver.mode = self.mode;
        c.solver.horizon = self.horizon;
        c.solver.alpha_levels = self.alpha_levels;
        c.sampling.seed = self.seed;
        c.sampling.count = self.samples;
        c.sampling.family = self.family;
        c.output.dir = self.out.clone();
        c
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvalArgs {
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    /// Time scale for mu, sigma, eta and circminus. A bare `integer` is
    /// sized to contain `--t`.
    #[arg(long, value_name = "SPEC")]
    pub timescale: Option<String>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub v: Option<f64>,
    /// Alias of `--r`.
    #[arg(long)]
    pub w: Option<f64>,
    /// Alias of `--v`.
    #[arg(long)]
    pub wk: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    /// Fuzzy state components (repeatable).
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub u: Vec<String>,
    #[arg(long = "u-k", value_name = "EXPR", allow_hyphen_values = true)]
    pub u_k: Vec<String>,
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub lam: Vec<String>,
    #[arg(long, value_name = "M")]
    pub alpha_levels: Option<usize>,
}

/// Runs one parsed command, printing progress to `out`. Returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Compare(a) => commands::compare(a, out),
        Command::Stability(a) => commands::stability(a, out),
        Command::Deriv(a) => commands::deriv(a, out),
        Command::Eval(a) => commands::eval(a, out),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> Result<i32, Failure>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Failure::config(anyhow::anyhow!(e.to_string())))?;
    execute(&cli, out)
}
