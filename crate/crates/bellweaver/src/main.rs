use std::io::Write;
use std::process::ExitCode;

use bellweaver::cli::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = bellweaver::run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bellweaver: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
