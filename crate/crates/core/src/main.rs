use clap::Parser;
use eqdescent::cli::{run, Cli};
use std::io::Write;

fn main() {
    let outcome = run(&Cli::parse());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
