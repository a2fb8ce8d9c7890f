use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    acg::cli::run(acg::cli::Cli::parse())
}
