use std::process::ExitCode;

use clap::Parser;
use flagcy_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("flagcy: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
