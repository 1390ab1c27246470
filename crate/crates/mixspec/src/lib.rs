//! Domain files, run reports and the `mixspec` command-line tool built on
//! [`mixspec_core`].

pub mod cli;
pub mod commands;
pub mod domain_file;
pub mod error;
pub mod report;

pub use error::{CliError, Result};
