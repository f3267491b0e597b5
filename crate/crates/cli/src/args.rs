use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cp_lattice::lattice::DEFAULT_TOL;

/// Complete-positivity tests for linear maps on M_n via Schur parameters.
#[derive(Debug, Parser)]
#[command(name = "cp-lattice", version)]
pub struct Cli {
    /// Relative tolerance of the lattice test.
    #[arg(long, global = true, env = "CP_LATTICE_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide complete positivity of a channel document.
    TestCp(InputArgs),
    /// Like test-cp, but report the full Schur parameter family when CP.
    Params(InputArgs),
    /// Rebuild a Choi matrix from a params document.
    Reconstruct {
        /// Params or result document; stdin when omitted or `-`.
        input: Option<PathBuf>,
    },
    /// Test a qubit map given in King-Ruskai form.
    Qubit(QubitArgs),
    /// Print the lattice network as Graphviz DOT.
    LatticeDot {
        /// Lattice size (number of scalers).
        #[arg(long)]
        n: Option<usize>,
        /// Params or result document used to annotate the nodes.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Print the Choi document of a deterministic random CP map on M_n.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Channel document; stdin when omitted or `-`.
    #[arg(conflicts_with = "batch")]
    pub input: Option<PathBuf>,
    /// File with one channel document per line; prints one result per line.
    #[arg(long)]
    pub batch: Option<PathBuf>,
    /// Worker threads for batch mode (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    ClosedForm,
    General,
    Both,
}

#[derive(Debug, Args)]
pub struct QubitArgs {
    /// Translation vector, `a,b,c`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "batch"
    )]
    pub t: Option<Vec<f64>>,
    /// Diagonal of the transfer block, `x,y,z`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "batch"
    )]
    pub lambda: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Mode::ClosedForm)]
    pub mode: Mode,
    /// File with one `{"t": [..], "lambda": [..]}` object per line.
    #[arg(long, conflicts_with_all = ["t", "lambda"])]
    pub batch: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}
