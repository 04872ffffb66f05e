//! Batch front end for `coxdiv`.
//!
//! A run takes a [`RunConfig`], writes one CSV report (plus an optional SVG
//! for divergence runs) and a `manifest.toml` into the output directory.
//!
//! Exit codes: 0 success, 2 bad config or input, 3 budget exceeded (memory,
//! polynomial span, clique size, or a row that hit the search horizon), 4
//! internal invariant violation.

pub mod args;
pub mod config;
pub mod plot;
mod run;

use std::path::Path;

pub use config::{Command, Job, RunConfig};
pub use plot::{emit_plot, render_svg};
pub use run::{automaton_csv, parse_automaton_csv, run, RunManifest, RunOutcome, MEMORY_BUDGET_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Core(#[from] coxdiv::Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(e) if e.is_internal() => 4,
            CliError::Core(e) if e.is_budget() || matches!(e, coxdiv::Error::TooLarge { .. }) => 3,
            CliError::Core(coxdiv::Error::Io { .. }) => 2,
            CliError::Core(_) => 2,
        }
    }
}

/// Entry point shared by the binary and the tests: parses arguments, runs,
/// prints the report and returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;

    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.into_config().and_then(|config| run(&config));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.csv);
            for (k, v) in &outcome.manifest.summary {
                println!("{k} = {v}");
            }
            println!("wrote {}", outcome.dir.display());
            if outcome.horizon_exceeded {
                eprintln!("error: some rows exceeded the search horizon; their values are lower bounds");
                return 3;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
