//! Configuration, orchestration and file output for the `radial-ns` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod scalars;

pub use commands::{CliError, Exit};
pub use config::{parse_config, parse_config_str, ConfigError, RunConfig};
