use clap::Parser;
use ifs_lab_cli::{run, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let code = run(cli, argv).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    std::process::exit(code);
}
