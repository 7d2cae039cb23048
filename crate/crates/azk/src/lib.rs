//! Command-line driver for `azk-core`: JSON problem files, byte-stable
//! reports, the built-in nilpotent example and seeded property suites.

pub mod cli;
pub mod commands;
pub mod error;
pub mod gen;
pub mod input;
pub mod render;
pub mod report;
pub mod suites;

pub use cli::{run, Outcome};
pub use error::CliError;
pub use report::{Report, Status};
