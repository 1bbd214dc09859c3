use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "polybary",
    version,
    about = "Exact skeleton barycenter decompositions of polytopes"
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file, written atomically; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Polytope JSON file.
    #[arg(long)]
    pub polytope: PathBuf,

    /// Target point as comma-separated rationals, e.g. `1/4,1/3,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,

    /// Number of points.
    #[arg(long)]
    pub n: usize,

    /// Skeleton dimension; must equal dim / n.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a point as the barycenter of n points in the d-skeleton.
    Decompose {
        #[command(flatten)]
        target: Target,

        /// Solve with the proof pipeline instead of the face-tuple search (prime n).
        #[arg(long)]
        via_proof: bool,
    },

    /// Check nP = S + ... + S on seeded samples.
    VerifyMinkowski {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        /// Samples per direction.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },

    /// Search the weighted triangular prism for a refuted point.
    FalsifyPrism {
        /// Extra weight on the third point, a positive rational.
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        grid: Grid,
    },

    /// Two points in the a- and b-skeleton of a (2d+1)-simplex.
    FalsifySimplex {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        d: usize,
        /// Samples for the (d, d+1) split.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        grid: Grid,
    },

    /// Run the proof pipeline and emit its trace as JSON lines (prime n).
    Trace {
        #[command(flatten)]
        target: Target,
    },

    /// Seeded random polytope with the origin in its interior.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        facets: usize,
        /// Include the vertex list.
        #[arg(long)]
        vertices: bool,
    },

    /// Re-validate a certificate against a polytope.
    CheckCert {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Grid {
    /// Finest dyadic level searched.
    #[arg(long, default_value_t = 8)]
    pub max_level: u32,

    /// Grid points per level, nearest the center first.
    #[arg(long, default_value_t = 256)]
    pub per_level: usize,
}
