//! Command-line front end for `hhdeform`: text formats for algebras and deformations,
//! one report per verb and the acceptance self-test.

pub mod commands;
pub mod format;
pub mod report;
pub mod selftest;

use thiserror::Error;

pub use report::{Check, Report};

/// Exit status for a report whose checks all pass.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for unreadable, malformed or invalid input.
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hhdeform::Error),
}

/// Exit status for a finished report.
pub fn exit_code(r: &Report) -> i32 {
    if r.passed() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Parses `a..b` (inclusive) or a single degree.
pub fn parse_degrees(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad degree range '{s}', expected a..b"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}
