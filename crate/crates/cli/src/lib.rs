//! File formats, the experiment runner and the `lapspec` command line for
//! the `lapspec` estimator.
//!
//! A run goes generate → simulate → recover → compare; each step is also a
//! subcommand operating on files:
//!
//! * graphs are plain-text edge lists ([`graph_file`]),
//! * measurements are `k,y` CSV with a JSON sidecar ([`measurements`]),
//! * estimates and match reports are JSON, with CSV tables for plotting
//!   ([`reports`]).
//!
//! Exit status is 0 on success, 2 for invalid input, 3 for numerical failure
//! and 4 for filesystem errors.

pub mod cli;
pub mod config;
pub mod error;
pub mod graph_file;
pub mod measurements;
pub mod reports;
pub mod runner;

pub use config::{AgentSpec, Dynamics, ExperimentConfig, ObservationConfig, Tolerances, Topology};
pub use error::{CliError, Stage};
pub use runner::{emit_plot_data, run_batch, run_experiment, BatchResult, RunRecord};
