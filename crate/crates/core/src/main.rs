use std::process::ExitCode;

use clap::Parser;
use shiftmip::cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    if outcome.status == shiftmip::cli::EXIT_INPUT {
        eprint!("{}", outcome.summary);
        if !outcome.summary.ends_with('\n') {
            eprintln!();
        }
    } else {
        print!("{}", outcome.summary);
    }
    ExitCode::from(outcome.status)
}
