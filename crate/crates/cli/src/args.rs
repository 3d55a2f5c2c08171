use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "hsvar", version, about = "Volatility-scaled historical simulation VaR")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract innovations and the volatility path (innovations.csv, volpath.csv).
    Extract(ExtractArgs),
    /// Simulate one-step scenarios and report VaR (scenarios.csv, var_report.json).
    Var(VarArgs),
    /// Fit model parameters by quasi-maximum likelihood (fit_report.json).
    Fit(FitArgs),
    /// Test extracted innovations for serial dependence (diagnostics.json).
    Diagnose(DiagnoseArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Extract(_) => "extract",
            Command::Var(_) => "var",
            Command::Fit(_) => "fit",
            Command::Diagnose(_) => "diagnose",
        }
    }
}

/// Flags shared by every subcommand. Each overrides the matching config key.
#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// Price CSV with header `date,value`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model as `localvol[+stochvol]`, e.g. `proportional+garch`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    /// Filter start: `default`, `unconditional`, `sample-variance[:N]` or `fixed:V0`.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default `hsvar-out/<config hash>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VarArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub confidence: Option<f64>,
    /// First date of the stressed window (inclusive).
    #[arg(long)]
    pub stressed_from: Option<NaiveDate>,
    /// Last date of the stressed window (inclusive).
    #[arg(long)]
    pub stressed_to: Option<NaiveDate>,
    #[arg(long, allow_negative_numbers = true)]
    pub base_s0: Option<f64>,
    #[arg(long)]
    pub base_v0: Option<f64>,
    /// Also write the ascending P&L sample to pnl_sorted.csv.
    #[arg(long)]
    pub pnl_csv: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated free parameters (default depends on the model).
    #[arg(long)]
    pub free: Option<String>,
    /// Leave the first likelihood term out of the objective.
    #[arg(long)]
    pub drop_first: bool,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub lags: Option<usize>,
    #[arg(long)]
    pub significance: Option<f64>,
}
