//! `senlab`: JSON in, JSON out. Exit codes: 0 success, 2 usage or schema,
//! 3 domain, 4 precision, 5 convergence; 1 when an acceptance run fails.

use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};
use senlab_core::Error;

mod cli;
mod commands;
mod input;

use cli::Cli;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) => 2,
        Error::Domain(_) => 3,
        Error::Precision(_) => 4,
        Error::Convergence(_) => 5,
    }
}

fn emit(cli: &Cli, report: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report).expect("reports are plain JSON") + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok((report, ok)) => match emit(&cli, &report) {
            Ok(()) if ok => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("senlab: {e}");
                ExitCode::from(exit_code(&e))
            }
        },
        Err(e) => {
            let report = json!({"error": {"kind": e.kind(), "message": e.message()}});
            eprintln!("senlab: {e}");
            let _ = emit(&cli, &report);
            ExitCode::from(exit_code(&e))
        }
    }
}
