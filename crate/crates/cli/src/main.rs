use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = copolar::Cli::parse();
    match copolar::run(&cli) {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("copolar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
