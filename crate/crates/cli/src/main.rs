use std::process::ExitCode;

use ar1_tstat_cli::{run, CliError, ERROR_EXIT_CODE};

fn main() -> ExitCode {
    match run(std::env::args_os().skip(1).collect()) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(CliError::Args(e)) => e.exit(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR_EXIT_CODE)
        }
    }
}
