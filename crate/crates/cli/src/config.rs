use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lalescu_core::PrecisionPolicy;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lalescu", version, about = "Certified checks for the Lalescu sequence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a_{n+1} < a_n for n in [from, to - 1].
    Verify,
    /// Audit inequalities from the catalog, or `all` of them.
    Audit {
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Least index from which an index bound holds up to --limit.
    Crossover { id: String },
    /// Sample a limit or residual series with the oracle.
    Asymptotics {
        target: String,
        /// Comma-separated increasing indices.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<u64>,
    },
    /// Check the two-sided Stirling bounds against exact factorials for n in [1, to].
    Robbins,
    /// List the inequality catalog.
    Catalog,
}

#[derive(Debug, Args)]
pub struct Options {
    /// First index. Audits clamp a missing value to each bound's threshold.
    #[arg(long, global = true)]
    pub from: Option<u64>,
    #[arg(long, global = true, default_value_t = 500)]
    pub to: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub limit: u64,
    /// Oracle precision in decimal digits.
    #[arg(long, global = true, env = "LALESCU_ORACLE_DIGITS", default_value_t = PrecisionPolicy::DEFAULT_ORACLE_DIGITS)]
    pub digits: u32,
    /// Outward widening of elementary functions, in ulps.
    #[arg(long, global = true, env = "LALESCU_SLACK_ULPS", default_value_t = PrecisionPolicy::DEFAULT_SLACK_ULPS)]
    pub slack_ulps: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Everything that determines a run; embedded in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub args: Vec<String>,
    /// `None` when the flag was not given.
    pub from: Option<u64>,
    pub to: u64,
    pub limit: u64,
    pub policy: PrecisionPolicy,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &Command, options: &Options, policy: PrecisionPolicy) -> Self {
        let (name, args) = match command {
            Command::Verify => ("verify", Vec::new()),
            Command::Audit { ids } => ("audit", ids.clone()),
            Command::Crossover { id } => ("crossover", vec![id.clone()]),
            Command::Asymptotics { target, schedule } => {
                let mut args = vec![target.clone()];
                args.extend(schedule.iter().map(u64::to_string));
                ("asymptotics", args)
            }
            Command::Robbins => ("robbins", Vec::new()),
            Command::Catalog => ("catalog", Vec::new()),
        };
        Self {
            command: name,
            args,
            from: options.from,
            to: options.to,
            limit: options.limit,
            policy,
            output_format: options.format,
            output_path: options.out.clone(),
        }
    }
}
