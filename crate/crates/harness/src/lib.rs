//! Experiment runner for the greedy block nonlinear Kaczmarz solvers:
//! single runs, Cartesian parameter sweeps, CSV/JSON emission and residual
//! history export. The `kaczmarz-bench` binary is a thin CLI over this.

pub mod emit;
pub mod plan;
pub mod runner;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Invalid flags, config file, or plan (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// Filesystem failure while emitting results (exit code 3).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
