//! The `dyncert` command-line tool.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure. Failures are
//! reported on stderr as `{"error": {"kind": …, "message": …}}`.

pub mod args;
pub mod config;
pub mod run;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use config::ConfigFile;
pub use run::{execute, CACHE_ENV};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. }
        | Error::NumericalInstability { .. }
        | Error::GridCoverage { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// JSON error record.
pub fn error_record(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Parses, runs and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("{}", error_record("usage", first));
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", error_record(e.kind(), &e.to_string()));
            exit_code(&e)
        }
    }
}
