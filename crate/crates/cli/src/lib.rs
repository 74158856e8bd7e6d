//! Library side of the `msk` command line tool: JSON config parsing with
//! JSON-pointer error paths, command execution, and deterministic CSV/SVG
//! emission. Split out of `main.rs` so the parsing surface can be fuzzed
//! and integration-tested directly.

pub mod config;
pub mod output;
pub mod runner;

pub use config::{parse_config, ConfigDoc, ParseError};
pub use runner::{run_command, CliError, Command, RunConfig};
