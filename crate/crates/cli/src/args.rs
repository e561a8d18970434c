use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use l1stab::Backend;

#[derive(Debug, Parser)]
#[command(
    name = "l1stab",
    version,
    about = "Schur stability of real monic polynomials by iterated l1 tests",
    after_help = "Coefficients are given highest degree first, leading coefficient included; they are \
                  normalized to a monic polynomial. Negative literals such as -1/2 may be written as is \
                  or as ~1/2.\n\nExit codes for check: 0 certified, 1 definitely unstable, 2 inconclusive, \
                  3 boundary, 64 usage error, 65 computation error, 74 I/O error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the staged l1 test and print a JSON certificate.
    Check(CheckArgs),
    /// Print every stage polynomial and its l1 norm.
    Trace(CheckArgs),
    /// Print the Jury table.
    Jury(PolyOut),
    /// Find all roots numerically.
    Roots(RootsArgs),
    /// Scan a parameter plane and record the first certifying stage per node.
    Region(RegionArgs),
    /// Verify the delayed Cournot oligopoly polynomials.
    Cournot(CournotArgs),
    /// Classify a Ricker competition equilibrium, or scan its (b, a) plane.
    Ricker(RickerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
    Pgm,
    Ppm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Debug, Args)]
pub struct PolyInput {
    /// Coefficients, highest degree first.
    #[arg(value_name = "COEFF")]
    pub coeffs: Vec<String>,

    /// Read polynomials from a file: one per line, whitespace separated, `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,

    /// Coefficients are given lowest degree first.
    #[arg(long)]
    pub ascending: bool,

    #[arg(long, value_enum, default_value = "exact")]
    pub backend: BackendArg,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: PolyInput,

    #[arg(long, visible_alias = "stages", default_value_t = 64)]
    pub max_stages: usize,

    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args)]
pub struct PolyOut {
    #[command(flatten)]
    pub input: PolyInput,

    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub input: PolyInput,

    /// Rotates the initial guesses of the root finder.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Half-width of the band around the unit circle reported as near_circle.
    #[arg(long, default_value_t = l1stab::roots::DEFAULT_MARGIN)]
    pub margin: f64,

    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<String>,
    #[arg(long)]
    pub x_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<String>,
    #[arg(long)]
    pub y_steps: Option<usize>,

    #[arg(long, value_enum, default_value = "exact")]
    pub backend: BackendArg,

    #[arg(long, visible_alias = "max-stages", default_value_t = 3)]
    pub stages: usize,

    /// Worker threads for the scan (default: one per core).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// quadratic-alpha-beta, ricker-ba, coeffs-n2 or coeffs-n3.
    #[arg(long = "map", value_name = "NAME")]
    pub mapping: String,

    /// r for ricker-ba, a2 for coeffs-n3.
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<String>,

    #[command(flatten)]
    pub grid: GridArgs,

    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args)]
pub struct CournotArgs {
    #[arg(long)]
    pub lambda: String,

    /// Delay.
    #[arg(long)]
    pub k: usize,

    /// Number of competitors (2 or 3).
    #[arg(long = "competitors", visible_alias = "n", default_value_t = 3)]
    pub competitors: usize,

    #[arg(long, visible_alias = "stages", default_value_t = 64)]
    pub max_stages: usize,

    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args)]
pub struct RickerArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,

    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,

    /// Scan the (b, a) plane at this r instead of classifying one point.
    #[arg(long)]
    pub scan_ba: bool,

    #[command(flatten)]
    pub grid: GridArgs,

    #[command(flatten)]
    pub output: OutArgs,
}
