//! `thzchan`: synthetic sub-THz sounder sweeps, path-loss model fits, and
//! bandwidth RMSE tables, with a manifest next to every output for exact
//! replay. Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical
//! failure.

use std::process::ExitCode;

use clap::Parser;

use thz_cli::{args, commands};

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
