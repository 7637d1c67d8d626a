//! State files, CSV exports, verification suites and the command-line front end.

mod app;
mod export;
mod statefile;
mod suites;

pub use app::run;
pub use export::{emit_curves_csv, example_rows, printed_lambdas, reproduce_example_figures, ExampleRow};
pub use statefile::{format_state, load_state, parse_state, save_state, StateFormat};
pub use suites::{run_suite, Check, Suite, SuiteReport};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Process exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant { .. } | Error::NonFinite { .. } => EXIT_INVARIANT,
        Error::UnsupportedDims { .. } | Error::DimensionLimit { .. } => EXIT_UNSUPPORTED,
        Error::NoTangent { .. } | Error::UnsortedSamples { .. } => EXIT_SUITE_FAILED,
        Error::Parse { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::InvalidDistribution(_)
        | Error::OutOfDomain(_)
        | Error::EnsembleTooSmall { .. }
        | Error::Io(_) => EXIT_USAGE,
    }
}
