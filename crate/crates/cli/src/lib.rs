//! Command-line front end of the `loggp` library: profiles, evolution runs,
//! velocity sweeps and the verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod verify;

pub use error::{CliError, CliResult};
