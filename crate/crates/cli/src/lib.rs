//! Experiment driver: configs in, CSV or JSON reports out.

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod sweep;

pub use config::{ExperimentConfig, Kind};
pub use error::{CliError, CliResult};
pub use report::{Field, Format, Report};
