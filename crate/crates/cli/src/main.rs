//! `thermocurv`: command-line front end.
//!
//! Artifacts go to `--out` when given and to stdout otherwise. Every failure
//! prints one line `error[Kind]: message` to stderr and exits with 1 (usage)
//! or 2 (domain or degeneracy).

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] thermocurv::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::Csv { .. } => "CsvError",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_usage() => 2,
            _ => 1,
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = commands::print_stdout(&e.render().to_string());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let body: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more"))
                .collect();
            let joined = body.join(" ");
            let msg = joined
                .trim()
                .strip_prefix("error: ")
                .unwrap_or(joined.trim());
            eprintln!("error[UsageError]: {}", single_line(msg));
            return ExitCode::from(1);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), single_line(&e.to_string()));
            ExitCode::from(e.exit_code())
        }
    }
}
