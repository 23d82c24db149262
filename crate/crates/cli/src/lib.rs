//! Command-line front end for `qbounce`: each computation as a subcommand
//! emitting CSV or JSON series, plus the acceptance report.

// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]


pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod series;
pub mod validation;

pub use config::{Convention, H2Mode, OutputFormat, RunConfig};
pub use error::{CliError, CliResult};
pub use series::SampledSeries;
