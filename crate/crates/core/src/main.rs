use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;

use cfk::cli::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Internal assertions (including arithmetic overflow) panic; map them to
    // exit code 3 so scripts can tell them apart from domain errors.
    match panic::catch_unwind(AssertUnwindSafe(|| cli::run(cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("error: internal assertion failure");
            ExitCode::from(3)
        }
    }
}
