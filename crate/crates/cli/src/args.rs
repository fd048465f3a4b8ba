//! Argument model for the `slp` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "slp", version, about = "Exact strong Lefschetz verification for coinvariant rings of reflection groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root system data as JSON.
    Roots(RootsArgs),
    /// Enumerate the Bruhat poset of a parabolic quotient.
    Quotient(QuotientArgs),
    /// Lefschetz verdicts on a poset file.
    Lefschetz(LefschetzArgs),
    /// Path-system enumeration between two layers.
    Paths(PathsArgs),
    /// Strong Lefschetz check on the full coinvariant ring.
    Coinvariant(CoinvariantArgs),
    /// Deformation from the relative ring to the full coinvariant ring.
    Deform(DeformArgs),
    /// Regenerate the reference data set with a pass/fail manifest.
    Tables(TablesArgs),
    /// Replay the inductive verification up to a given rank.
    VerifyTheorem(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    /// Coxeter type, e.g. A3, H4, I2(7).
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    /// Parabolic subset: a type name (E7, A1xA2), 1-based indices (1,3) or
    /// "empty". Defaults to the designated subset for the type.
    #[arg(long)]
    pub theta: Option<String>,
    /// Write the Hasse diagram as Graphviz DOT.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Write the poset as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the summary to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strong,
    Weak,
    Middle,
    Paths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct LefschetzArgs {
    /// Poset file written by `quotient --json`.
    #[arg(long)]
    pub poset: PathBuf,
    #[arg(long, value_enum, default_value = "strong")]
    pub mode: Mode,
    /// Restrict to one degree i (required for TSV output and paths mode).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Only vertex-disjoint path systems (paths mode).
    #[arg(long)]
    pub vertex_disjoint: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// In middle mode, also run the full determinant chain.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    /// Poset file; alternatively give --type (and optionally --theta).
    #[arg(long, conflicts_with = "ty")]
    pub poset: Option<PathBuf>,
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: Option<String>,
    #[arg(long, requires = "ty")]
    pub theta: Option<String>,
    /// Source degree i; systems run from V^i to V^(r-i).
    #[arg(long, conflicts_with = "layer")]
    pub degree: Option<usize>,
    /// Perfect matchings of the covers V^(i-1) -> V^i instead.
    #[arg(long)]
    pub layer: Option<usize>,
    /// Node ids of V^i left out of the matching (with --layer).
    #[arg(long, value_delimiter = ',', requires = "layer")]
    pub drop: Vec<usize>,
    #[arg(long)]
    pub vertex_disjoint: bool,
    /// Include every system in the output.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoinvariantArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    /// Check the strong Lefschetz property of the element.
    #[arg(long)]
    pub check_strong: bool,
    /// "rho", or comma-separated values of the element on the simple coroots.
    #[arg(long, default_value = "rho")]
    pub element: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeformArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    #[arg(long)]
    pub theta: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Regenerate the full reference set.
    #[arg(long)]
    pub paper: bool,
    /// Output directory.
    #[arg(long, default_value = "tables")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    pub max_rank: usize,
    /// Use full determinant chains for H4 and E8 instead of the middle form.
    #[arg(long)]
    pub exhaustive: bool,
    /// Write the manifest here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
