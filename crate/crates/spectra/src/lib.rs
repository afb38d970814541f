//! Command-line front end for `spectra-core`: runs verification suites and
//! emits self-describing JSON reports.
//!
//! Exit codes: 0 when every check passed, 1 when a tolerance failed (the
//! report is still written), 2 on invalid input.

pub mod args;
pub mod io;
pub mod report;
mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Verb};
pub use report::{report_schema_version, Report, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] spectra_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 1 for numerical breakdowns, 2 for everything the caller can fix.
    pub fn exit_code(&self) -> i32 {
        use spectra_core::Error as E;
        match self {
            RunError::Core(E::RootNotConverged { .. } | E::NotPositiveDefinite { .. } | E::DimensionMismatch { .. }) => 1,
            _ => 2,
        }
    }
}

/// Runs a parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, RunError> {
    match &cli.verb {
        Verb::Factor(a) => suites::factor(a),
        Verb::Product(a) => suites::product(a),
        Verb::Verify(a) => suites::verify(a),
        Verb::Oracle(a) => suites::oracle(a),
        Verb::TwoParam(a) => suites::two_param(a),
        Verb::Trace(a) => suites::trace(a),
        Verb::Solve(a) => suites::solve(a),
    }
}

/// Parses `argv` (including the program name), runs the command, writes the
/// report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let json = report.to_json();
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &json),
        None => std::io::stdout().lock().write_all(json.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return 2;
    }
    if report.pass {
        0
    } else {
        eprintln!("{}: a check exceeded its tolerance", report.command);
        1
    }
}
