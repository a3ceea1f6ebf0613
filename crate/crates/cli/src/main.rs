use std::process::ExitCode;

use clap::Parser;
use qpa_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match qpa_cli::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
