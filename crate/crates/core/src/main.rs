use clap::Parser;
use pite_lab::cli::{execute, Cli};
use pite_lab::error::PiteError;

fn main() {
    let cli = Cli::parse();
    let mut stderr = std::io::stderr();
    if let Err(e) = execute(&cli, &mut stderr) {
        if let PiteError::Io { source, .. } = &e {
            if source.kind() == std::io::ErrorKind::BrokenPipe {
                return;
            }
        }
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
