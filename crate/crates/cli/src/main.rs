//! `lalescu`: certified monotonicity, inequality audits and asymptotic
//! residuals from the command line.
//!
//! Exit codes: 0 every verdict `Yes`, 1 a certified violation, 2 `Unknown`
//! left after escalation, 64 usage errors, 70 internal failures.

mod commands;
mod config;

use std::io::Write;
use std::panic;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use lalescu_core::asymptotics::Target;
use lalescu_core::audit::InequalityId;
use lalescu_core::{Error, IntervalError, PrecisionPolicy};
use serde_json::{json, Value};

use commands::Outcome;
use config::{Cli, Command, Format, RunConfig};

const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match &err {
            Error::UnknownInequality(_) => {
                let ids: Vec<&str> = InequalityId::ALL.iter().map(|i| i.token()).collect();
                Failure::Usage(format!("{err}; known ids: all, {}", ids.join(", ")))
            }
            Error::UnknownExpression(_) => {
                let targets: Vec<&str> = Target::ALL.iter().map(|t| t.token()).collect();
                Failure::Usage(format!("{err}; known targets: {}", targets.join(", ")))
            }
            Error::Precondition { .. }
            | Error::Range { .. }
            | Error::Precision { .. }
            | Error::Unsupported(_)
            | Error::Interval(IntervalError::Policy(_)) => Failure::Usage(err.to_string()),
            _ => Failure::Internal(err.to_string()),
        }
    }
}

fn document(config: &RunConfig, outcome: &Outcome) -> Value {
    let mut summary = serde_json::Map::new();
    summary.insert("all_yes".into(), json!(outcome.status == commands::Status::Pass));
    summary.insert("first_failure".into(), outcome.first_failure.clone());
    for (k, v) in &outcome.extra_summary {
        summary.insert((*k).into(), v.clone());
    }
    json!({"config": config, "entries": outcome.entries, "summary": summary})
}

fn render(config: &RunConfig, outcome: &Outcome) -> Result<Vec<u8>, Failure> {
    let internal = |e: &dyn std::fmt::Display| Failure::Internal(e.to_string());
    match config.output_format {
        Format::Text => {
            let mut s = outcome.text.join("\n");
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&document(config, outcome)).map_err(|e| internal(&e))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.header).map_err(|e| internal(&e))?;
            for row in &outcome.rows {
                w.write_record(row).map_err(|e| internal(&e))?;
            }
            w.into_inner().map_err(|e| internal(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let policy = PrecisionPolicy::new(cli.options.slack_ulps, cli.options.digits).map_err(Error::from)?;
    let config = RunConfig::new(&cli.command, &cli.options, policy);
    if !matches!(cli.command, Command::Catalog) {
        lalescu_core::oracle::verify_constants(&policy)?;
    }
    let outcome = match cli.command {
        Command::Verify => commands::verify(&config, policy)?,
        Command::Audit { .. } => commands::audit(&config, policy)?,
        Command::Crossover { .. } => commands::crossover(&config, policy)?,
        Command::Asymptotics { .. } => commands::asymptotics(&config, policy)?,
        Command::Robbins => commands::robbins(&config, policy)?,
        Command::Catalog => commands::catalog(),
    };
    let bytes = render(&config, &outcome)?;
    let written = match &config.output_path {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    written.map_err(|e| Failure::Internal(format!("cannot write report: {e}")))?;
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
