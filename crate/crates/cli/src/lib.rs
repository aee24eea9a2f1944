//! Command-line front end. Sweeps write CSV or JSON datasets; the analysis
//! commands write reports.
//!
//! Exit codes: 0 success, 1 usage or validation, 2 numerical failure,
//! 3 I/O, 4 frozen set differs from the boundary prediction.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod commands;
pub mod error;
pub mod output;
pub mod sweep;

pub use commands::{run, Cli};
pub use error::CliError;
