//! `hsvar` command-line front end.
//!
//! Exit codes: 0 on success, 1 on input, config or model errors, 2 on
//! numerical failure. Errors are printed to stderr as
//! `{"error":{"kind":...,"message":...}}`.

mod args;
mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use hsvar::Error;
use serde_json::json;

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({"error": {"kind": kind, "message": message}}));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("InvalidArguments", e.to_string().trim_end(), 1),
    };
    match commands::run(&cli.command) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = if matches!(e, Error::NumericalFailure { .. }) { 2 } else { 1 };
            fail(e.kind(), &e.to_string(), code)
        }
    }
}
