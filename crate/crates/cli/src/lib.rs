//! Batch front-end for the `qtrans` verification suites.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{Cli, Command, ConfigError, OperatorChoice, RunConfig, THREADS_ENV};
pub use report::{Json, Limit, Report};
pub use suites::run;
