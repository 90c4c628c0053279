use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "paley",
    version,
    about = "Residue-alternating 1-factors of K_{p+1} with distinct edge lengths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a qualifying 1-factor as JSON.
    Construct {
        #[arg(long)]
        p: u64,
        /// Primitive root to use when p = 1 (mod 8) instead of the smallest
        /// qualifying one.
        #[arg(long)]
        root: Option<u64>,
        /// Largest p for which the backtracking search may run
        /// (default: $PALEY_ORACLE_CAP, then 10000).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Check a factor file.
    Verify {
        /// Factor file in the format written by `construct`.
        file: PathBuf,
        /// Expected prime; must match the file.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Translate a factor into a full 1-factorization and check it against
    /// the sign matrix.
    Factorization {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Smallest qualifying primitive root for every p = 1 (mod 8) in a range,
    /// one JSON line per prime.
    Scan {
        #[arg(long, default_value_t = 1)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// Write lines here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest accepted --max (default 10^9).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// The counting inequality for p and the bounds regime p falls in.
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        json: bool,
    },
    /// Quartic character sums over primitive roots, p = 1 (mod 8).
    Charsum {
        #[arg(long)]
        p: u64,
        /// Largest p that may be enumerated (default 10^6).
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Whether the sign matrix of order p + 1 is Hadamard.
    Hadamard {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        json: bool,
        /// Also print the matrix.
        #[arg(long)]
        matrix: bool,
    },
}
