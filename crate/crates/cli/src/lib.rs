//! Batch front end for `dicke-fcs-core`: critical couplings, λ sweeps,
//! time traces and the verification suites, written as CSV.

pub mod commands;
pub mod config;
pub mod output;

use clap::{Parser, Subcommand};

pub use commands::{run, Report};
pub use config::{Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] dicke_fcs_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Parser)]
#[command(name = "dicke-fcs", version, about = "Photon counting statistics of the open Dicke model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Critical couplings λ1 ≤ λ2 ≤ λ3 and the phase boundaries
    Criticals,
    /// One CSV row per λ for the chosen quantity
    Scan,
    /// Occupations and accumulated cumulants against time
    Evolve,
    /// Closed forms against numerics and the Lindblad oracles
    Verify,
}
