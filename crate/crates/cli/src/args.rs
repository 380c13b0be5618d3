use std::path::PathBuf;

use ar1_tstat::montecarlo::Functional;
use ar1_tstat::Ar1Params;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliResult;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ar1-tstat",
    version,
    about = "Moments, oracles and simulations for the t-statistic of a Gaussian AR(1) process"
)]
pub struct Cli {
    /// Worker threads for simulation work (default: all available cores).
    #[arg(long, global = true, env = "AR1_TSTAT_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate closed-form moments next to their trace-oracle values.
    TableMoments(TableArgs),
    /// Check every closed form against its oracle; exit 1 on failure.
    Verify(VerifyArgs),
    /// Simulate a statistic and report its empirical moments and KS test.
    Simulate(SimulateArgs),
    /// Dump a density on a grid.
    #[command(subcommand)]
    Density(DensityCommand),
    /// Replay the run recorded in a manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Sample length.
    #[arg(long)]
    pub n: usize,
    /// Autoregressive coefficient, |rho| <= 1 - 1e-9.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
    /// Innovation standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Process mean.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
}

impl ModelArgs {
    pub fn params(&self) -> CliResult<Ar1Params> {
        Ok(Ar1Params::new(self.mu, self.sigma, self.rho, self.n)?)
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Sample lengths, e.g. `2,5,10` or `5:50:5`.
    #[arg(long, default_value = "2,5,10,50")]
    pub grid_n: String,
    /// Correlations, e.g. `-0.5,0,0.5` or `-0.9:0.9:0.3`.
    #[arg(long, default_value = "-0.5,0,0.5,0.9", allow_hyphen_values = true)]
    pub grid_rho: String,
    /// Innovation standard deviations (same syntax).
    #[arg(long, default_value = "1")]
    pub sigma: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridSize {
    Small,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Preset (n, rho) grid; `--grid-n`/`--grid-rho` override either axis.
    #[arg(long, value_enum, default_value_t = GridSize::Full)]
    pub grid: GridSize,
    #[arg(long)]
    pub grid_n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_rho: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Base tolerance, applied as `tol * max(1, |reference|)`.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Replications for the Monte Carlo check of the oracle moments (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub mc_reps: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Output file for the JSON report (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionalArg {
    Mean,
    S2,
    Tstat,
    Mtstat,
}

impl From<FunctionalArg> for Functional {
    fn from(f: FunctionalArg) -> Self {
        match f {
            FunctionalArg::Mean => Functional::SampleMean,
            FunctionalArg::S2 => Functional::S2,
            FunctionalArg::Tstat => Functional::TStat,
            FunctionalArg::Mtstat => Functional::ModifiedTStat,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FunctionalArg::Tstat)]
    pub functional: FunctionalArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Summary output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-replication values (`replication,value`) here.
    #[arg(long)]
    pub values: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DensityCommand {
    /// Student t density by closed form and by quadrature.
    Student(StudentDensityArgs),
    /// Kernel density estimate of a simulated statistic.
    Simulated(SimulatedDensityArgs),
}

#[derive(Debug, Args)]
pub struct StudentDensityArgs {
    /// Degrees of freedom.
    #[arg(long)]
    pub dof: f64,
    /// Evaluation points.
    #[arg(long, default_value = "-8:8:0.1", allow_hyphen_values = true)]
    pub t_grid: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulatedDensityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FunctionalArg::Mtstat)]
    pub functional: FunctionalArg,
    #[arg(long, default_value = "-8:8:0.1", allow_hyphen_values = true)]
    pub t_grid: String,
    /// Kernel bandwidth (default: Silverman's rule).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
}
