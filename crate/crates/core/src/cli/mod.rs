//! Library side of the `vacpol` command-line tool.

pub mod config;
pub mod table;
pub mod verify;

pub use config::{ConfigOverrides, EvaluationMethod, Family, Format, Grid, RunConfig, TOL_ENV};
pub use table::{cmd_fermi, cmd_ks, cmd_point, cmd_table, PotentialSample, PotentialTable, CSV_HEADER};
pub use verify::{cmd_verify, Suite, VerifyOptions, VerifyReport};

use crate::error::Error;

/// Process exit status for success.
pub const EXIT_OK: i32 = 0;
/// Verification or numerical failure.
pub const EXIT_FAILURE: i32 = 1;
/// Invalid input.
pub const EXIT_USAGE: i32 = 2;

/// Exit status for an error: bad input gives 2, anything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}
