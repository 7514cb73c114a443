//! The `fzspec` command line.
//!
//! Commands compute with `fzspec-core` and emit CSV point files, JSON
//! metadata and SVG plots. Plotting (`overlay`) only reads CSV, it never
//! recomputes.
//!
//! Exit codes: 0 success, 2 usage, 3 numeric failure, 4 I/O.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command, SpectrumCmd, WordsCmd};
pub use error::{CliError, CliResult};

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot configure {n} threads: {e}")))
}

pub fn dispatch(cli: Cli) -> CliResult<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Words { cmd: WordsCmd::Enumerate(a) } => commands::words_enumerate(&a),
        Command::Qpoly(a) => commands::qpoly(&a),
        Command::Spectrum { cmd } => match cmd {
            SpectrumCmd::Word(a) => commands::spectrum_word(&a),
            SpectrumCmd::Sentence(a) => commands::spectrum_sentence(&a),
            SpectrumCmd::Random(a) => commands::spectrum_random(&a),
        },
        Command::EscapeMap(a) => commands::escape(&a),
        Command::Overlay(a) => commands::overlay(&a),
    }
}

/// Runs the program on `argv` (including the program name) and returns the exit code.
pub fn main_with(argv: impl IntoIterator<Item = OsString>) -> i32 {
    let argv = match config::merge_config(argv.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("fzspec: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout with code 0, real errors to stderr with 2.
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fzspec: {e}");
            e.exit_code()
        }
    }
}
