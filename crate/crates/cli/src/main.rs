use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "phylotoric",
    version,
    about = "Lattice polytopes, toric ideals and Ehrhart data of 3-valent phylogenetic trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Tree statistics and canonical form.
    Describe,
    /// Vertices, sockets and facet inequalities of the polytope.
    Polytope,
    /// Face incidence matrix.
    Faces,
    /// Dual polytope, polarity check and a vertex-link division.
    Dual,
    /// Quadratic binomials in socket coordinates.
    Ideal,
    /// Hilbert-Ehrhart polynomial and relative Ehrhart sequence.
    Ehrhart,
    /// Volume distribution delta^r as CSV plus a gnuplot script.
    VolumeDist,
    /// Elementary mutations and a mutation path to a caterpillar.
    Mutate,
    /// Run the numbered checks and print a pass/fail table.
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

/// Options shared by all subcommands.
#[derive(clap::Args, Debug, Clone)]
pub struct Options {
    /// Tree: Newick, a generator (`star:d`, `caterpillar:k`, `snowflake`),
    /// or a file holding either or an edge list (one `u v` pair per line).
    #[arg(long, global = true)]
    pub tree: Option<String>,
    /// Dilation factor.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Leaf label (pointed leaf, default 1).
    #[arg(long, global = true)]
    pub leaf: Option<u32>,
    /// Index r of the volume distribution.
    #[arg(long, global = true)]
    pub r: Option<usize>,
    /// Socket bitstring of a vertex (for `dual`; default all zeros).
    #[arg(long, global = true)]
    pub socket: Option<String>,
    /// Run a single numbered check (for `verify`).
    #[arg(long, global = true)]
    pub check: Option<u8>,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: Format,
    /// Seed for random sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (for `volume-dist`, a directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn init_threads() {
    if let Some(n) = std::env::var("PHYLOTORIC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // a second initialisation can only fail if something already
        // started the pool, in which case the default is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    init_threads();
    match commands::run(args.command, &args.options) {
        Ok(code) => code,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
