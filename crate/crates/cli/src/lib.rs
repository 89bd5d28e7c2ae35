//! Command-line front end: subcommand parsing and JSON run reports.

pub mod commands;
pub mod report;

pub use commands::{parse_and_run, run, Cli, Command};
pub use report::{Failure, RunReport};
