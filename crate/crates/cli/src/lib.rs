//! Library backing the `hypertree` binary: configuration resolution, the
//! Monte Carlo experiment harness, goodness-of-fit and torsion reports, the
//! self-check suite, and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod experiment;
pub mod gof;
pub mod torsion;
pub mod verify;

use hypertree_core::Error;

/// Process exit code for an error: 3 when a size cap was exceeded, 1 when a
/// computation failed or an internal invariant was violated, 2 for usage and
/// input mistakes.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => 3,
        Error::Numerical(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Renders a float with 17 significant digits, enough for a lossless
/// `f64` round trip through text.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
