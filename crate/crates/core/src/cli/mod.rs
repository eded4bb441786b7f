//! Scenario-driven command-line front end.

pub mod config;
pub mod runner;

pub use config::{parse_config, parse_fading, Command, RunManifest, RunParams};
pub use runner::{error_json, execute, format_float, run, RunOutput, RunSummary};
