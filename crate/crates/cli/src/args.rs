use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Higher-order digital nets and sequences: construction, verification and
/// discrepancy studies.
#[derive(Parser, Debug, Serialize)]
#[command(name = "hods", version)]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the primary output here and the run manifest to `<out>.manifest.json`.
    /// Without it, output goes to stdout and the manifest to stderr.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Enumeration budget as a power of two; overrides HODS_BUDGET_BITS.
    #[arg(long, global = true, env = "HODS_BUDGET_BITS")]
    pub budget_bits: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Generate points of a net, a shifted net or an N-point set.
    Gen(GenArgs),
    /// Print generating matrices in text form.
    Matrices(MatrixArgs),
    /// Compute the exact quality parameter and compare it with a claimed t.
    Verify(VerifyArgs),
    /// Enumerate the dual set.
    Dual(DualArgs),
    /// Exact Walsh checks.
    Walsh(WalshArgs),
    /// Discrepancy or integration error of one point set.
    Disc(DiscArgs),
    /// Convergence study over a range of sizes.
    Study(StudyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointFormat {
    /// Decimal floats, 17 significant digits.
    CsvDecimal,
    /// Hex numerators plus the precision W, bit-exact.
    CsvHex,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalshCheck {
    Orthogonality,
    Character,
    DeltaCoeff,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Order1,
    Order2,
    Propagated,
}

/// Which point set to build.
#[derive(Args, Debug, Clone, Serialize)]
pub struct PointArgs {
    /// Dimension.
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    /// Net of 2^m points.
    #[arg(long, conflicts_with = "n_points", required_unless_present = "n_points")]
    pub m: Option<u32>,
    /// Exactly N points: the propagation rule for order 2, a sequence prefix for order 1.
    #[arg(long)]
    pub n_points: Option<u64>,
    /// Output digits W (defaults to m for order 1 and 2m for order 2).
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub order: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub points: PointArgs,
    /// Apply a random digital shift drawn from this seed (hex or decimal).
    #[arg(long, value_parser = parse_seed)]
    pub shift: Option<u64>,
    #[arg(long, value_enum, default_value_t = PointFormat::CsvDecimal)]
    pub format: PointFormat,
}

/// Which generating matrices to build.
#[derive(Args, Debug, Clone, Serialize)]
pub struct MatrixSetArgs {
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Columns; nets have 2^m points.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub order: u32,
    /// Use all-zero matrices (a deliberately bad net).
    #[arg(long)]
    pub zero_matrices: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub set: MatrixSetArgs,
    /// Rows (defaults to m for order 1 and 2m for order 2).
    #[arg(long)]
    pub rows: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub set: MatrixSetArgs,
    /// Claimed quality parameter (defaults to the construction's proven bound).
    #[arg(long)]
    pub t: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
pub struct DualArgs {
    #[command(flatten)]
    pub set: MatrixSetArgs,
    /// Maximum number of dual elements to print.
    #[arg(long, default_value_t = 256)]
    pub limit: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct WalshArgs {
    #[arg(long, value_enum)]
    pub check: WalshCheck,
    #[command(flatten)]
    pub set: MatrixSetArgs,
    /// Index range: k, l < max for orthogonality, each l_j < max for delta-coeff.
    #[arg(long, default_value_t = 64)]
    pub max: u64,
    /// Maximum number of dual elements checked by the character test.
    #[arg(long, default_value_t = 1024)]
    pub limit: usize,
    /// Random non-dual indices checked by the character test.
    #[arg(long, default_value_t = 1000)]
    pub random: usize,
    #[arg(long, default_value_t = 0, value_parser = parse_seed)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct DiscArgs {
    #[command(flatten)]
    pub points: PointArgs,
    /// Norm index; 2 is exact (Warnock), larger even values use Monte Carlo.
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Accept q outside the even integers; results are flagged in the manifest.
    #[arg(long)]
    pub allow_any_q: bool,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0, value_parser = parse_seed)]
    pub seed: u64,
    /// Report the integration error of a test function instead
    /// (constant, product-linear, product-quadratic).
    #[arg(long)]
    pub function: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct StudyArgs {
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, value_enum, default_value_t = Source::Order2)]
    pub source: Source,
    /// First size: level m for nets, point count N for propagated sets.
    #[arg(long, default_value_t = 4)]
    pub from: u64,
    /// Last size, inclusive.
    #[arg(long, default_value_t = 10)]
    pub to: u64,
    /// Step between sizes.
    #[arg(long, default_value_t = 1)]
    pub step: u64,
    /// Also estimate this even Lq by Monte Carlo.
    #[arg(long)]
    pub mc_q: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0, value_parser = parse_seed)]
    pub seed: u64,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| format!("invalid seed {s:?}: {e}"))
}
