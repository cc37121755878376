mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbmc::config::Scenario;

/// Impulse responses, particle simulation and detection metrics for
/// diffusion-based molecular communication.
#[derive(Debug, Parser)]
#[command(name = "dbmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the closed-form expected count on a time grid.
    Analytic {
        #[command(flatten)]
        source: Source,
        /// Time grid `start:stop:step` in seconds; defaults to the sampling grid.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the particle simulation and aggregate the repetitions.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// Worker threads; results do not depend on this.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        output: Output,
    },
    /// ITR and error probability tables for curve or series CSV files.
    Metrics {
        /// Curve, per-repetition or aggregated CSV files.
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        detection: Detection,
        #[command(flatten)]
        output: Output,
    },
    /// Side-by-side summary of several scenarios sharing one geometry.
    Compare {
        /// Config files; repeat the flag. Defaults to the three desk presets.
        #[arg(long = "config")]
        configs: Vec<PathBuf>,
        /// Preset names; repeat the flag.
        #[arg(long = "preset")]
        presets: Vec<String>,
        /// Override the master seed of every config.
        #[arg(long)]
        seed: Option<u64>,
        /// Use simulated means instead of the closed-form curves.
        #[arg(long)]
        simulate: bool,
        /// Worker threads for `--simulate`.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        detection: Detection,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// TOML config file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset name (default: desk-none).
    #[arg(long)]
    preset: Option<String>,
    /// Override the scenario of the config.
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct Detection {
    /// Symbol period `t_s` for the ITR, in seconds; defaults to the config value.
    #[arg(long)]
    ts: Option<f64>,
    /// Inclusive threshold range `start:stop`.
    #[arg(long, default_value = "0:40")]
    zeta: String,
    /// Detection model for the error table.
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Detection instant in seconds; defaults to the light time d^2/(6D).
    #[arg(long)]
    at: Option<f64>,
    /// Gaussian tail form.
    #[arg(long, value_enum, default_value_t = GaussianArg::UpperTail)]
    gaussian: GaussianArg,
}

#[derive(Debug, Args)]
struct Output {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioArg {
    None,
    Enzyme,
    Photolysis,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::None => Scenario::None,
            ScenarioArg::Enzyme => Scenario::Enzyme,
            ScenarioArg::Photolysis => Scenario::Photolysis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Binomial,
    Poisson,
    Gaussian,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GaussianArg {
    UpperTail,
    AsPrinted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
