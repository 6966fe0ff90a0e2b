//! Command-line front end: every invocation resolves to a serializable
//! [`RunConfig`] and then runs it.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

pub use commands::{run, Outcome};
pub use config::RunConfig;
pub use error::{CliError, CliResult};

use args::{Cli, Command};
use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut impl Write, stderr: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_USAGE } else { error::EXIT_OK };
            let _ = write!(if e.use_stderr() { stderr as &mut dyn Write } else { stdout }, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "fracmotion: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut impl Write) -> CliResult<()> {
    let (cfg, print_only) = match command {
        Command::Simulate(a) => (a.to_config()?, a.print_config),
        Command::Density(a) => (a.to_config()?, a.print_config),
        Command::Verify(a) => (a.to_config()?, a.print_config),
        Command::Run { config } => (RunConfig::load(&config)?, false),
    };
    if print_only {
        cfg.validate()?;
        let _ = writeln!(out, "{}", cfg.to_json_pretty());
        return Ok(());
    }
    match run(&cfg)? {
        Outcome::Simulated { rows } => {
            if let RunConfig::Simulate(s) = &cfg {
                let _ = writeln!(out, "wrote {rows} endpoints to {}", s.output.display());
            }
        }
        Outcome::Density { rows, nan_rows } => {
            if let RunConfig::Density(d) = &cfg {
                let _ = writeln!(out, "wrote {rows} rows ({nan_rows} off support) to {}", d.output.display());
            }
        }
        Outcome::Verified(report) => {
            for e in &report.checks {
                let _ = writeln!(out, "{}", e.summary_line());
            }
            let failed = report.failures().count();
            if failed > 0 {
                return Err(CliError::VerificationFailed(failed));
            }
        }
    }
    Ok(())
}
