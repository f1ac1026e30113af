//! Command-line front end for `hyperhier-core`: catalog loading, seeded
//! sampling, dispatch and JSON reports.

pub mod catalog;
pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod sample;

pub use config::{Cli, Command, RunConfig};
pub use error::CliError;
pub use report::{Report, Verdict};
pub use run::run;
