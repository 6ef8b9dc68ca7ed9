//! `pgames`: command-line front end. Exit status 0 on success, 1 on a
//! domain error, 2 on a usage error.

mod args;
mod run;

use std::io::Write;

use clap::Parser;

fn main() {
    let cli = args::Cli::parse();
    match run::execute(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
