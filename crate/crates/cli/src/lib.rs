//! Command-line front end: file ingestion, command dispatch and reports.
//!
//! Exit codes: 0 pass, 1 residual failure, 2 parse or I/O error,
//! 3 invariant or flag violation, 4 numerical failure.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;

use std::fs;

pub use args::Cli;
pub use error::{exit, CliError, CliResult};

use args::Format;
use commands::Outcome;

/// Runs a parsed command line, writes its outputs and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(outcome) => {
            if outcome.report.pass {
                exit::PASS
            } else {
                exit::RESIDUAL_FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Invariant(format!(
                "--tol {tol} must be finite and nonnegative"
            )));
        }
    }
    let outcome = commands::dispatch(cli)?;
    fs::create_dir_all(&cli.out).map_err(|e| CliError::io(&cli.out, e))?;
    let (name, report) = match cli.format {
        Format::Json => ("report.json", outcome.report.to_json()),
        Format::Csv => ("report.csv", outcome.report.to_csv()),
    };
    for (file, bytes) in outcome
        .files
        .iter()
        .map(|(f, b)| (f.as_str(), b))
        .chain([(name, &report)])
    {
        let path = cli.out.join(file);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    }
    print!("{}", String::from_utf8_lossy(&report));
    Ok(outcome)
}
