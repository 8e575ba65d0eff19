//! Experiment runner for `symprop-core`: config files, artifact formats,
//! run manifests, replay, and the `symprop` command line.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod run;

pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, Result};
pub use manifest::Manifest;
pub use run::{replay, run, RunOptions, RunOutcome};
