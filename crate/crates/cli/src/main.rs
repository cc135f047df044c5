use std::process::ExitCode;

use clap::Parser;
use uav_tdma_cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
