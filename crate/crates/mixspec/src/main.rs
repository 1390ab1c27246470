use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mixspec::cli::Cli;
use mixspec::commands::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &outcome.output {
                Some(path) => fs::write(path, &outcome.text),
                None => std::io::stdout().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("mixspec: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => {
            eprintln!("mixspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
