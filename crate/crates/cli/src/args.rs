use std::path::PathBuf;

use aapt_core::numeric::DEFAULT_SINGULAR_TOL;
use aapt_core::states::BellKind;
use clap::{Parser, Subcommand};

use crate::commands::ConstructKind;

#[derive(Debug, Parser)]
#[command(
    name = "aapt",
    version,
    about = "Ancilla-assisted process tomography toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Faithfulness report for a two-qubit state (exit 2 if unfaithful).
    Analyze {
        state: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SINGULAR_TOL)]
        tol: f64,
    },
    /// Simulate noisy ancilla-assisted tomography of a channel.
    Tomography {
        state: PathBuf,
        channel: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, default_value_t = DEFAULT_SINGULAR_TOL)]
        tol: f64,
    },
    /// Monte Carlo sweep described by a JSON config; writes CSV.
    Sweep {
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the noise level in the config.
        #[arg(long)]
        sigma: Option<f64>,
        /// Overrides the tolerance in the config.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Optimal condition number and determinant for N system qubits, as CSV.
    Scaling {
        #[arg(long, default_value_t = 3)]
        max_n: u32,
    },
    /// Write a state file.
    Construct {
        #[arg(long, value_enum)]
        kind: ConstructKind,
        /// Werner mixing parameter.
        #[arg(long)]
        p: Option<f64>,
        /// X-state diagonal, e.g. `--s 0.3,0.3,-0.3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Option<Vec<f64>>,
        #[arg(long, default_value = "phi+", value_parser = parse_bell)]
        which: BellKind,
        /// Tetrahedral state with both sides equally oriented (det = +1/27).
        #[arg(long)]
        same_orientation: bool,
    },
}

fn parse_bell(s: &str) -> Result<BellKind, String> {
    s.parse().map_err(|e: aapt_core::Error| e.to_string())
}
