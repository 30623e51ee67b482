//! Command-line front end: spectra, wavefunction samples, duality checks, oracle
//! verification and bound-state enumeration, written as CSV or JSON.

mod commands;
mod config;
mod table;

pub use config::{Format, ModelKind, PictureFlag, RunConfig};

use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification tolerance is missed.
pub const EXIT_VERIFY: i32 = 1;
/// Exit status for usage or configuration errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pdmdual", version, about = "Exactly solvable oscillator and Coulomb spectra with a numerical oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form energies, ordered by (angular number, n_r).
    Spectrum(RunConfig),
    /// Sample closed-form radial functions on a grid.
    Wavefunction(RunConfig),
    /// Map an oscillator state to its Coulomb dual and compare the functions pointwise.
    Duality(RunConfig),
    /// Compare closed forms with the finite-difference oracle.
    Verify(RunConfig),
    /// Enumerate the normalizable states of a curved model.
    BoundStates(RunConfig),
}

impl Command {
    fn split(self) -> (&'static str, RunConfig) {
        match self {
            Command::Spectrum(c) => ("spectrum", c),
            Command::Wavefunction(c) => ("wavefunction", c),
            Command::Duality(c) => ("duality", c),
            Command::Verify(c) => ("verify", c),
            Command::BoundStates(c) => ("bound-states", c),
        }
    }
}

/// Failure of a run, carrying its exit status.
#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Runtime(_) => EXIT_VERIFY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

/// Parse `args` (program name first), run the command and return the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let (name, flags) = cli.command.split();
    match commands::execute(name, flags) {
        Ok(out) => match out.emit(stdout, stderr) {
            Ok(()) => out.status,
            Err(e) => report(stderr, &Failure::Runtime(e)),
        },
        Err(f) => report(stderr, &f),
    }
}

fn report(stderr: &mut dyn Write, failure: &Failure) -> i32 {
    let _ = writeln!(stderr, "error: {}", failure.message());
    failure.code()
}
