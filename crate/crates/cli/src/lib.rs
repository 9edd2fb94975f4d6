//! Command-line front end for `axoball-core`.
//!
//! Exit codes: 0 success, 1 output i/o failure, 2 invalid input or
//! arguments, 3 verification failure.

pub mod commands;
pub mod error;
pub mod problem;
pub mod profile;
pub mod report;
pub mod verify;

pub use commands::{run, Cli, Command, MatrixFormat, MatrixKind};
pub use error::CliError;
pub use problem::Problem;
pub use report::Report;
