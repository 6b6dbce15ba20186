//! `isofusion` command-line tool.
//!
//! Exit status: 0 on success, 1 when a strict fusion run fails or a validated
//! file is invalid, 2 on unreadable or malformed input.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_line = command_line();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(commands::EXIT_INPUT);
        }
    }
    let status = match &cli.command {
        Command::Fuse(a) => commands::fuse(a, &command_line),
        Command::Lattice(a) => commands::lattice(a, &command_line),
        Command::Orbitals(a) => commands::orbitals(a, &command_line),
        Command::Eigen(a) => commands::eigen(a, &command_line),
        Command::Validate(a) => commands::validate(a, &command_line),
        Command::Search(a) => commands::search(a, &command_line),
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::EXIT_INPUT)
        }
    }
}

/// The arguments as given, with the program path reduced to its file name so
/// that reports do not depend on where the binary lives.
fn command_line() -> Vec<String> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(first) = args.first_mut() {
        if let Some(name) = std::path::Path::new(first.as_str()).file_name() {
            *first = name.to_string_lossy().into_owned();
        }
    }
    args
}
