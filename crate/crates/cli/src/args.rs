use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "graph-uncertainty",
    version,
    about = "Space-frequency localization ranges of filter pairs on graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sandwich approximation of the localization range, with scatter and corner bounds.
    Range {
        #[command(flatten)]
        common: CommonArgs,
        /// Eigenvectors whose mean values are scattered over the range.
        #[arg(long, value_enum, default_value_t = OperatorChoice::S)]
        scatter: OperatorChoice,
    },
    /// Eigenvalue decay of S and of the rotated operator for the standard pairs.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One eigenvector of S or of the rotated operator, drawn over the graph.
    Eigvec {
        #[command(flatten)]
        common: CommonArgs,
        /// 1-based index in descending eigenvalue order.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OperatorChoice::S)]
        operator: OperatorChoice,
    },
    /// Runs the invariant checks and writes a JSON report; exits 1 on any failure.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generate or inspect graphs.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum GraphAction {
    /// Writes points.csv (when coordinates exist) and edges.txt.
    Build {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Prints a summary of the graph and its spectrum.
    Inspect {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorChoice {
    /// The space-frequency operator S.
    S,
    /// The rotated operator cos(theta) M + sin(theta) C.
    R,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Config file; flags take precedence over its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Point cloud CSV, edge list, sensor:n,R,seed or fixture:bipartite4|complete4.
    #[arg(long, value_name = "SOURCE")]
    pub graph: Option<String>,
    /// Connection radius for point cloud inputs.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Matrix file with an explicit Laplacian eigenbasis (columns).
    #[arg(long, value_name = "FILE")]
    pub basis: Option<PathBuf>,
    /// Filter pair, e.g. distance-projection:bandwidth=100 or custom:f=1/0/1/0,g=1/0/1/0.
    #[arg(long, value_name = "SPEC")]
    pub pair: Option<String>,
    /// uniform:K or adaptive:tol,Kmax.
    #[arg(long, value_name = "SCHEDULE")]
    pub angles: Option<String>,
    /// Rotation angle in radians; multiples of pi like 9pi/20 are accepted.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of svg,csv,json.
    #[arg(long)]
    pub format: Option<String>,
    /// Number of random signals for containment checks.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub sample_seed: Option<u64>,
}
