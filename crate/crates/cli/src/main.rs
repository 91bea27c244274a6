use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use optia_cli::cli::{Cli, Command};
use optia_cli::commands::{self, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let outcome = match &cli.command {
        Command::Run(a) => commands::cmd_run(a),
        Command::Sweep(a) => commands::cmd_sweep(a),
        Command::VerifyOp(a) => commands::cmd_verify_op(a),
        Command::Fit(a) => commands::cmd_fit(a),
        Command::Report(a) => commands::cmd_report(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Verification(msg) => println!("{msg}"),
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
