//! File formats and the command-line front end for `bellweaver-core`.
//!
//! [`run`] executes a parsed [`cli::Cli`] against an output stream; the
//! binary maps its errors to exit codes via [`error::CliError::exit_code`].

pub mod cli;
mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod formats;
pub mod output;

pub use commands::run;
pub use error::{CliError, CliResult};
