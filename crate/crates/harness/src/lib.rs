//! Command-line driver for `mvbv-core`: TOML experiment configs, geometric
//! grids, and deterministic CSV/JSON output.
//!
//! Exit codes: 0 on success, 1 when a checked inequality fails, 2 on bad
//! configuration or IO.

use std::ffi::OsString;
use std::path::PathBuf;

pub mod cli;
pub mod config;
pub mod grid;
pub mod output;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] mvbv_core::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let parsed = match cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli::execute(parsed) {
        Ok(None) => EXIT_OK,
        Ok(Some(failure)) => {
            eprintln!("mvbv: check failed: {failure}");
            EXIT_ASSERTION
        }
        Err(e) => {
            eprintln!("mvbv: {e}");
            EXIT_CONFIG
        }
    }
}
