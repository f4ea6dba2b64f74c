use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use algcic::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("algcic: {e}");
            2
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
