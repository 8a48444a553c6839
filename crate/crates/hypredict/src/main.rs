//! Thin binary wrapper: parse, run, map errors to the exit-code contract.

use std::process::ExitCode;

use clap::Parser;

use hypredict::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap sends --help/--version to stdout (success) and real
            // argument errors to stderr; the latter are validation failures
            // under the documented contract, hence exit code 1.
            let is_usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(u8::from(is_usage));
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
