mod args;
mod bench;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            if let Err(e) = report.print(cli.json) {
                eprintln!("opaque-sat: {e}");
                return ExitCode::from(report::EXIT_INPUT);
            }
            ExitCode::from(report.code)
        }
        Err(failure) => {
            eprintln!("opaque-sat: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
