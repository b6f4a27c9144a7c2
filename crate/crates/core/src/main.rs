use std::process::ExitCode;

use clap::Parser;
use ewitness::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
