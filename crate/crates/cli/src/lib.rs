//! Command-line front end for the KLJN transient simulator.

pub mod commands;
pub mod config;

pub use commands::{cmd_tables, cmd_validate, cmd_waveforms, CliError, ValidationOutcome};
pub use config::{parse_config, ConfigError, RunConfig};
