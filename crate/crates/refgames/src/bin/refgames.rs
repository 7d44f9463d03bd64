use clap::Parser;
use refgames::cli::{self, Cli};

fn main() {
    let cli = Cli::parse();
    let result = cli::run(cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    std::process::exit(cli::exit_code(&result));
}
