//! `csd`: ingest a citation corpus, compute structural diversity and run
//! the correlation, trend and prediction analyses on top of it.

mod args;
mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// A problem with how the command was invoked, as opposed to with its data.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Component(a) => commands::component(a),
        Command::Sd(a) => commands::sd(a),
        Command::Correlate(a) => commands::correlate(a),
        Command::Trends(a) => commands::trends(a),
        Command::Predict(a) => commands::predict(a),
        Command::Report(a) => commands::report(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CSD_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
