//! Library side of the `ar1-tstat` command-line tool. [`run`] parses an
//! argument vector, executes the command and reports how the process should
//! exit; `main` is a thin wrapper around it.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod manifest;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command, DensityCommand};
pub use error::{CliError, CliResult};
use manifest::{manifest_path, RunManifest, RunRecord};

/// How a successful invocation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

/// Exit code for an error: usage, validation and I/O problems all map to 2.
pub const ERROR_EXIT_CODE: u8 = 2;

/// Runs one invocation. `args` excludes the program name.
pub fn run(args: Vec<OsString>) -> CliResult<Outcome> {
    let argv = std::iter::once(OsString::from("ar1-tstat")).chain(args.iter().cloned());
    let cli = Cli::try_parse_from(argv)?;
    let workers = resolve_workers(cli.workers)?;

    if let Command::Rerun(rerun) = &cli.command {
        let recorded = RunManifest::read(&rerun.manifest)?;
        if recorded.command == "rerun" {
            return Err(CliError::usage("manifest", "refers to another rerun"));
        }
        return run(recorded.args.into_iter().map(OsString::from).collect());
    }

    let (name, record, outcome) = match &cli.command {
        Command::TableMoments(a) => ("table-moments", commands::table::run(a)?, Outcome::Success),
        Command::Verify(a) => {
            let (record, passed) = commands::verify::run(a, workers)?;
            let outcome = if passed {
                Outcome::Success
            } else {
                Outcome::VerificationFailed
            };
            ("verify", record, outcome)
        }
        Command::Simulate(a) => ("simulate", commands::simulate::run(a, workers)?, Outcome::Success),
        Command::Density(DensityCommand::Student(a)) => {
            ("density", commands::density::run_student(a)?, Outcome::Success)
        }
        Command::Density(DensityCommand::Simulated(a)) => (
            "density",
            commands::density::run_simulated(a, workers)?,
            Outcome::Success,
        ),
        Command::Rerun(_) => unreachable!("handled above"),
    };
    write_manifest(name, &args, workers, record)?;
    Ok(outcome)
}

/// The manifest sits next to the primary output; runs that print to stdout
/// have nowhere to put one and skip it.
fn write_manifest(command: &str, args: &[OsString], workers: usize, record: RunRecord) -> CliResult<()> {
    let Some(primary) = record.outputs.first().cloned() else {
        return Ok(());
    };
    RunManifest::new(command, args, workers, record).write(&manifest_path(&primary))
}

fn resolve_workers(requested: Option<usize>) -> CliResult<usize> {
    match requested {
        Some(0) => Err(CliError::usage("--workers", "must be >= 1")),
        Some(w) => Ok(w),
        None => Ok(ar1_tstat::exec::default_workers()),
    }
}
