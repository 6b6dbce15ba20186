//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "isofusion",
    version,
    about = "Isolating fusions of based algebras"
)]
pub struct Cli {
    /// Worker threads for the parallel commands; defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal isolating (semi)fusion of one seed family.
    Fuse(FuseArgs),
    /// Fusions from every small seed family, with their lattice.
    Lattice(LatticeArgs),
    /// Orbital relation matrix of a permutation group or semidirect product.
    Orbitals(OrbitalsArgs),
    /// Minimal polynomials, factorizations and cyclotomicity verdicts.
    Eigen(EigenArgs),
    /// Coherence or identity-law and associativity check of an input file.
    Validate(ValidateArgs),
    /// Fusions from randomly drawn seed families.
    Search(SearchArgs),
}

/// Exactly one algebra source.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Relation matrix file, plain or bracketed.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    /// Structure tensor file.
    #[arg(long)]
    pub tensor: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Fusion,
    Semifusion,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Seed family, 0-based: sets separated by `;`, members by `,`.
    #[arg(long)]
    pub seed: String,
    #[arg(long, value_enum, default_value_t = Mode::Fusion)]
    pub mode: Mode,
    /// Keep refining when a seed cannot stay whole instead of failing.
    #[arg(long)]
    pub relaxed: bool,
    /// Report path; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write the fused relation matrix (scheme input only).
    #[arg(long)]
    pub fused_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 2)]
    pub max_seed_size: usize,
    /// Also combine up to this many disjoint seed sets.
    #[arg(long)]
    pub multi: Option<usize>,
    /// Combine all small subsets rather than only seeds that succeeded alone.
    #[arg(long)]
    pub combine_all: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write the lattice as a DOT digraph.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitalsArgs {
    /// Group file with a `degree` line and `gen` lines.
    #[arg(
        long,
        conflicts_with = "semidirect",
        required_unless_present = "semidirect"
    )]
    pub group: Option<PathBuf>,
    /// `m,k,M00,M01,M10,M11` for Z_m² ⋊ Z_k.
    #[arg(long)]
    pub semidirect: Option<String>,
    /// Subgroup elements `a,b,c;...`, each standing for ((a,b),c); the
    /// regular action is used when absent.
    #[arg(long, requires = "semidirect")]
    pub subgroup: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write the relation matrix in the bracketed format.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fuse along this partition (`0;1,4;2,3`) first.
    #[arg(long)]
    pub partition: Option<String>,
    /// Support of an element to analyze, `i,j,...`; repeatable. Every basis
    /// element is analyzed when absent.
    #[arg(long)]
    pub element: Vec<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Check associativity of a tensor input (quartic in the rank).
    #[arg(long)]
    pub associativity: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    /// Disjoint seed sets per sampled family.
    #[arg(long, default_value_t = 1)]
    pub sets: usize,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Seed family always tried in addition to the samples; repeatable.
    #[arg(long)]
    pub plant: Vec<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
