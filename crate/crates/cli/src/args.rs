use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "rydsim", version, about = "Periodically driven Rydberg-atom phase gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one gate scenario and write its trajectory and error budget.
    Simulate(SimulateArgs),
    /// Run Monte Carlo and parameter-sweep campaigns.
    Campaign(CampaignArgs),
    /// Rerun the fast presets and compare them with stored goldens.
    Check(CheckArgs),
    /// List the built-in presets.
    ListPresets,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in preset name (see `list-presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON config file.
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory, created if missing.
    #[arg(long, default_value = "rydsim-out")]
    pub out: PathBuf,
    /// Overrides the seed from the config.
    #[arg(long, env = "RYDSIM_SEED")]
    pub seed: Option<u64>,
    /// Relative integrator tolerance; the absolute tolerance is 1% of it.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write a matplotlib script that plots the CSV outputs.
    #[arg(long)]
    pub emit_plot_script: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    /// Worker threads; 0 uses every available core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Directory holding `tolerances.json` and `goldens.json`.
    #[arg(long)]
    pub goldens: PathBuf,
    /// Rewrite `goldens.json` from the current build instead of comparing.
    #[arg(long)]
    pub update: bool,
}
