//! Configuration, command dispatch and serialization for the `lasercool`
//! binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command, FigureId};
pub use config::{parse_config, Format, RunConfig};
pub use error::{CliError, Result};
pub use output::Report;
