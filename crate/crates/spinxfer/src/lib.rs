//! Std companion to `spinxfer-core`: JSON scenario documents, the
//! materials catalog, parallel Monte Carlo and the `spinxfer` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod config;
mod error;
pub mod number;
pub mod parallel;
pub mod report;

pub use config::CliConfig;
pub use error::CliError;
