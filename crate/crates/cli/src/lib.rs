//! The `choquet` command line: argument parsing, dispatch to
//! `choquet_core`, and JSON/CSV report emission.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical convergence failure
//! (the report is still written, with failure markers), 4 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

pub mod args;
pub mod config;
pub mod emit;
pub mod run;

pub use config::{Command, Format, RunConfig};
pub use run::{execute, Outcome, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] choquet_core::Error),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_convergence() => EXIT_CONVERGENCE,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

/// Reads a run config, either bare or as the `meta.config` of a report.
pub fn load_config(path: &str) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{path} is not valid JSON: {e}")))?;
    let cfg = match value.pointer("/meta/config") {
        Some(c) => c.clone(),
        None => value,
    };
    serde_json::from_value(cfg)
        .map_err(|e| CliError::usage(format!("invalid config in {path}: {e}")))
}

/// Runs the CLI on `argv` (including the program name), writing reports
/// without `--out` to `stdout` and diagnostics to `stderr`.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let quiet = cli.quiet;
    let result = cli.into_config().and_then(|cfg| {
        let outcome = execute(&cfg)?;
        let bytes = emit::render(&outcome.report, cfg.format)?;
        match &cfg.out {
            Some(path) => write_report(path, &bytes)?,
            None => stdout
                .write_all(&bytes)
                .map_err(|e| CliError::io("stdout", e))?,
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if !quiet {
                let _ = writeln!(stderr, "{}", outcome.summary);
            }
            if outcome.failed {
                EXIT_CONVERGENCE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "choquet: {e}");
            e.exit_code()
        }
    }
}

fn write_report(path: &str, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(Path::new(path), bytes).map_err(|e| CliError::io(path, e))
}
