//! Command-line front end of the sloshing solver.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical or I/O failure,
//! 3 validation failure.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use icefish_core::Error;
use serde_json::json;

use crate::config::{RawArgs, RunConfig};
use crate::output::write_json_value;

#[derive(Debug)]
pub enum CliError {
    /// Bad flag or configuration; the message names the flag.
    Usage(String),
    /// Solver, numerical, or I/O failure.
    Runtime(anyhow::Error),
    /// Closed-form entries outside their oracle tolerance.
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            // alternate form prints the context chain on one line
            CliError::Runtime(e) => write!(f, "{e:#}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    /// Precondition violations are usage errors; everything else is numerical.
    fn from(e: Error) -> Self {
        match e {
            Error::CutoffTooSmall { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidBond(_)
            | Error::EigenCount { .. }
            | Error::ModeZero(_)
            | Error::InvalidAlpha(_)
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

/// Run with a resolved configuration; writes data files plus the sidecar
/// `<command>.meta.json`.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| {
        CliError::Runtime(anyhow::anyhow!("cannot create {}: {e}", cfg.out.display()))
    })?;
    let outcome = commands::dispatch(cfg)?;
    let files: Vec<String> = outcome
        .files
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect();
    let meta = json!({
        "program": "icefish",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "files": files,
        "summary": outcome.summary,
    });
    let meta_path = cfg.out.join(format!("{}.meta.json", cfg.command.name()));
    write_json_value(&meta_path, &meta)?;
    if outcome.failed_rows > 0 {
        return Err(CliError::Validation(format!(
            "{} entries outside tolerance, see {}",
            outcome.failed_rows,
            files.join(", ")
        )));
    }
    Ok(())
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let raw = match RawArgs::try_parse_from(args) {
        Ok(raw) => raw,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    // a closed pipe (e.g. `| head`) is not an error
                    let _ = write!(std::io::stdout(), "{e}");
                    0
                }
                _ => {
                    let rendered = e.to_string();
                    eprintln!(
                        "icefish: {}",
                        rendered.lines().next().unwrap_or("invalid arguments")
                    );
                    1
                }
            };
        }
    };
    match RunConfig::resolve(raw).and_then(|cfg| execute(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("icefish: {e}");
            e.exit_code()
        }
    }
}
