use std::process::ExitCode;

use clap::Parser;
use ellmds_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("ellmds: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
