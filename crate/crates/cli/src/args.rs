use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qrg",
    version,
    about = "Renormalization-group sweeps of trace distance and residual entanglement in XY models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Observable and its γ-derivative over a grid of couplings, per RG step
    Sweep(SweepArgs),
    /// Pseudo-critical points for steps 1..=max-steps and their power-law fits
    Scaling(ScalingArgs),
    /// Fixed points of the anisotropy flow and their stability
    FixedPoints(FixedPointArgs),
    /// Run the built-in consistency checks
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by commands that write a data file.
#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; `-` writes to standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Directory for the default file name (overrides QRG_OUT_DIR)
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value file with the same keys as the long flags; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// 1d or 2d
    #[arg(long)]
    pub model: Option<String>,
    /// trace-distance, tau or both
    #[arg(long)]
    pub observable: Option<String>,
    /// Comma-separated RG steps
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_max: Option<f64>,
    /// Number of grid points, endpoints included
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub model: Option<String>,
    /// trace-distance or tau
    #[arg(long)]
    pub observable: Option<String>,
    /// Deepest RG step (at least 3); defaults to 7 in 1D and 5 in 2D
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_max: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FixedPointArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_max: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Print a JSON summary instead of text
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON summary to this file
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
