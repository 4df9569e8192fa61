mod args;
mod commands;
mod output;
mod source;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use output::{Failure, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let failure = Failure::invalid(e.to_string().trim_end());
            eprintln!("{}", failure.to_json());
            return ExitCode::from(Status::InvalidParams as u8);
        }
    };
    let out_dir = cli.out_dir.as_path();
    let result = match &cli.command {
        Command::Build(a) => commands::build(out_dir, a),
        Command::Exponents(a) => commands::exponents(out_dir, a),
        Command::Plot(a) => commands::plot(out_dir, a),
        Command::Jacobian(a) => commands::jacobian(out_dir, a),
        Command::Oracle(a) => commands::oracle(out_dir, a),
    };
    match result {
        Ok(outcome) => {
            // a closed pipe on stdout is not worth a panic
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                serde_json::to_string_pretty(&outcome.summary).expect("json values serialize")
            );
            ExitCode::from(outcome.status as u8)
        }
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(failure.status as u8)
        }
    }
}
