//! Experiment sweeps, CSV traces and the diagnostics front end behind the
//! `rbcd` binary.

pub mod check;
pub mod config;
mod error;
pub mod experiment;
pub mod trace_csv;

pub use check::{run_check, CheckArgs};
pub use config::{parse_config, parse_seeds, ExperimentConfig, RunArgs, OUT_DIR_ENV};
pub use error::CliError;
pub use experiment::{run_experiment, ExperimentResult, RunSpec, SummaryRow};
pub use trace_csv::{read_trace_csv, write_trace_csv, CSV_HEADER};
