use clap::Parser;

use nicepair_cli::args::Cli;
use nicepair_cli::{commands, CliError};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = match commands::run(cli, &mut stdout) {
        Ok(()) => 0,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            1
        }
        Err(CliError::VerifyFailed) => 1,
    };
    std::process::exit(code);
}
