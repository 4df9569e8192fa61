use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pgnlab",
    version,
    about = "Build, check and plot generalized (n+1)-systems"
)]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "PGNLAB_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a family member, validate it and write it as JSON.
    Build(BuildArgs),
    /// Exponent profile, transference checks and printed-formula cross-check.
    Exponents(ExponentsArgs),
    /// Combined-graph polylines as CSV and SVG.
    Plot(PlotArgs),
    /// Finite-difference Jacobian rank of the exponent maps of family B.
    Jacobian(JacobianArgs),
    /// Successive-minima trajectory of a direction vector.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    A,
    B,
}

/// Family parameters. Fractions are `p/q` strings; `--omega-hat inf` selects
/// the infinite variant of family A.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub family: Option<Family>,
    #[arg(short = 'n')]
    pub n: Option<usize>,
    #[arg(long = "omega-hat")]
    pub omega_hat: Option<String>,
    /// Family A mixing parameter [default: 1]
    #[arg(short = 'a')]
    pub a: Option<String>,
    /// Family A starting point [default: 1]
    #[arg(long)]
    pub q0: Option<String>,
    /// Family B default point (C = 3).
    #[arg(long)]
    pub defaults: bool,
    /// Family B dilation factor C.
    #[arg(long = "c")]
    pub c: Option<String>,
    /// Family B coordinates A_2,…,A_n.
    #[arg(long, value_delimiter = ',')]
    pub coords: Vec<String>,
    /// Construction periods of the infinite family A variant.
    #[arg(long, default_value_t = 8)]
    pub periods: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// System file written by `build`.
    #[arg(long, conflicts_with = "family")]
    pub system: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Output file name inside the output directory.
    #[arg(long, default_value = "system.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Random (k, m, p0, p) tuples for the pente check.
    #[arg(long, default_value_t = 200)]
    pub pente_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "exponents.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotFormat {
    Csv,
    Svg,
    Both,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Periods from the domain start (dilation systems).
    #[arg(long, default_value_t = 1, conflicts_with_all = ["from", "to"])]
    pub plot_periods: usize,
    #[arg(long, requires = "to")]
    pub from: Option<String>,
    #[arg(long, requires = "from")]
    pub to: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub format: PlotFormat,
    /// File stem for plot.csv / plot.svg.
    #[arg(long, default_value = "plot")]
    pub stem: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    W,
    F,
}

#[derive(Debug, Args)]
pub struct JacobianArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub map: MapArg,
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, conflicts_with = "coords")]
    pub defaults: bool,
    /// Point (C, A_2, …, A_n).
    #[arg(long, value_delimiter = ',')]
    pub coords: Vec<String>,
    #[arg(long, default_value = "1/1024")]
    pub h: String,
    #[arg(long, default_value = "jacobian.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Continued fraction of θ for the direction (1, θ), e.g. "[1;1,1,...]".
    #[arg(
        long,
        conflicts_with = "direction",
        required_unless_present = "direction"
    )]
    pub cf: Option<String>,
    /// Comma-separated decimals, or `cf:[a0;a1,...]`.
    #[arg(long)]
    pub direction: Option<String>,
    #[arg(long)]
    pub qmax: f64,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
    /// Fixed enumeration radius; doubling from 2 when absent.
    #[arg(long)]
    pub radius: Option<i64>,
    #[arg(long, default_value_t = 1 << 16)]
    pub max_radius: i64,
    #[arg(long, default_value = "trajectory.csv")]
    pub out: PathBuf,
}
