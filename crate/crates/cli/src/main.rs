mod args;
mod commands;
mod config;
mod error;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, GraphAction};
use config::RunConfig;
use error::Result;

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Range { common, scatter } => commands::range::run(RunConfig::resolve(&common)?, scatter),
        Command::Spectrum { common } => commands::spectrum::run(RunConfig::resolve(&common)?),
        Command::Eigvec { common, k, operator } => {
            commands::eigvec::run(RunConfig::resolve(&common)?, k, operator)
        }
        Command::Verify { common } => commands::verify::run(RunConfig::resolve(&common)?),
        Command::Graph { action } => match action {
            GraphAction::Build { common } => commands::graph::build(RunConfig::resolve(&common)?),
            GraphAction::Inspect { common } => commands::graph::inspect(RunConfig::resolve(&common)?),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
