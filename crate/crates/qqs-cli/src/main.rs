//! `qqs` — batch front end for the ququart simulation library.

// Negated comparisons reject NaN along with out-of-range argument values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod manifest;
mod numfmt;
mod selector;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{prepare, qkd, replay, scan_tilt, stokes, tomography};

#[derive(Debug, Parser)]
#[command(
    name = "qqs",
    version,
    about = "Simulation of four-level polarization states of photon pairs: preparation, polarimetry, tomography, and QKD"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the plate tilt angle and emit the singles/coincidence scan CSV.
    ScanTilt(scan_tilt::Args),
    /// Simulate a 16-setting tomography acquisition and reconstruct the state.
    Tomography(tomography::Args),
    /// Run a QKD session and print the summary JSON.
    Qkd(qkd::Args),
    /// Print the averaged Stokes parameters and polarization degree of a state.
    Stokes(stokes::Args),
    /// Apply a retardation plate to a state and print the output state JSON.
    Prepare(prepare::Args),
    /// Re-run a previously written manifest, reproducing its outputs.
    Replay(replay::Args),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ScanTilt(args) => scan_tilt::run(&args),
        Command::Tomography(args) => tomography::run(&args),
        Command::Qkd(args) => qkd::run(&args),
        Command::Stokes(args) => stokes::run(&args),
        Command::Prepare(args) => prepare::run(&args),
        Command::Replay(args) => replay::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::CmdError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
