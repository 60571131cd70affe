//! Command-line front end for the `baker_kit` pipeline.

pub mod commands;
pub mod error;
pub mod instance;
pub mod report;

pub use error::CliError;
pub use report::{ReportDocument, Timing, SCHEMA_VERSION};
