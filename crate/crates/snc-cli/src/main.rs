//! `snc`: build, reduce, and verify secure linear network codes on
//! directed acyclic networks.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "snc",
    about = "Secure linear network codes: construction, rate reduction, verification",
    long_about = "Builds local-encoding-preserving families of secure linear network codes \
                  with a fixed security level and every rate from the maximum down to zero, \
                  and verifies codes both algebraically and by exhaustive enumeration.\n\n\
                  The environment variable SNC_BUDGET overrides the evaluation budget of the \
                  exhaustive checks (default 100000000)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Min-cut capacity, minimum cut, and primary minimum cut for an edge set
    Mincut {
        /// Network file
        net: PathBuf,
        /// Comma-separated edge ids, e.g. e1,e9
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// List the primary edge subsets of the given size
    PrimarySets {
        net: PathBuf,
        /// Security level r (subset size)
        #[arg(long)]
        security: usize,
    },
    /// Construct a decodable code, optionally with a pre-coding matrix
    Construct {
        net: PathBuf,
        /// Code dimension (default: the network capacity C_min)
        #[arg(long)]
        dimension: Option<usize>,
        /// Also construct a pre-coding matrix for this security level
        #[arg(long)]
        security: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the kernel file here instead of stdout
        #[arg(long)]
        kernels_out: Option<PathBuf>,
        /// Write the pre-coding matrix here instead of stdout
        #[arg(long)]
        q_out: Option<PathBuf>,
    },
    /// One rate-reduction step on an existing secure code
    Reduce {
        net: PathBuf,
        /// Kernel file of the current code
        #[arg(long)]
        kernels: PathBuf,
        /// Pre-coding matrix file of the current code
        #[arg(long)]
        q: PathBuf,
        /// Current information rate
        #[arg(long)]
        rate: usize,
        /// Security level
        #[arg(long)]
        security: usize,
        /// Override the canonical choices, e.g. --pin-choices h=0,1 theta=3
        #[arg(long, num_args = 1..)]
        pin_choices: Vec<String>,
        /// Write rate-<w>.kern and rate-<w>.Q here instead of stdout
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Build the whole family: rates C_min - r down to 0
    Family {
        net: PathBuf,
        /// Security level r
        #[arg(long)]
        security: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base the family on these kernels instead of a seeded construction
        #[arg(long)]
        kernels: Option<PathBuf>,
        /// Attempt the construction even when the sufficient field-size
        /// bound q > max(|T|, |A_r|) is violated
        #[arg(long)]
        best_effort: bool,
        /// Output directory for rate-<w>.kern, rate-<w>.Q, report.txt
        #[arg(long, default_value = "family")]
        out_dir: PathBuf,
    },
    /// Check a secure code: algebraic conditions, optionally exhaustive
    Verify {
        net: PathBuf,
        #[arg(long)]
        kernels: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        rate: usize,
        #[arg(long)]
        security: usize,
        /// Also run the exhaustive secrecy and decodability oracles
        #[arg(long)]
        oracle: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Mincut { net, set } => commands::cmd_mincut(net, set),
        Command::PrimarySets { net, security } => commands::cmd_primary_sets(net, *security),
        Command::Construct { net, dimension, security, seed, kernels_out, q_out } => {
            commands::cmd_construct(net, *dimension, *security, *seed, kernels_out.as_deref(), q_out.as_deref())
        }
        Command::Reduce { net, kernels, q, rate, security, pin_choices, out_dir } => {
            commands::cmd_reduce(net, kernels, q, *rate, *security, pin_choices, out_dir.as_deref())
        }
        Command::Family { net, security, seed, kernels, best_effort, out_dir } => {
            commands::cmd_family(net, *security, *seed, kernels.as_deref(), *best_effort, out_dir)
        }
        Command::Verify { net, kernels, q, rate, security, oracle } => {
            commands::cmd_verify(net, kernels, q, *rate, *security, *oracle)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.exit_code as u8)
        }
    }
}
