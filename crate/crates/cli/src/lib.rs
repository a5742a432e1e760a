//! Command-line harness for `smoothspec`: state specifications, the commands
//! behind each subcommand and CSV reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod report;
pub mod state;
pub mod verify;

use smoothspec::random::{rng_from_seed, StateRng};

pub use error::{CliError, Result};
pub use report::{OutputOptions, RunReport, Table};
pub use state::{Resolved, StateKind, StateSpec};

/// Generator for trial `trial` of stream `stream` under a master seed.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> StateRng {
    let mut rng = rng_from_seed(seed);
    rng.set_stream((stream << 32) | trial);
    rng
}
