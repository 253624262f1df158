//! Command-line front end, artifact formats and the parallel Monte Carlo
//! driver for the `levysup` core crate.

pub mod args;
pub mod commands;
pub mod driver;
pub mod grid;
pub mod output;
pub mod validate;

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;
use levysup::QuadratureConfig;

use args::Cli;
use commands::Context;

/// Environment variable holding the default master seed.
pub const SEED_ENV: &str = "LEVYSUP_SEED";
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Exit status of an invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// A residual or statistic fell outside its tolerance.
    Failed = 1,
    /// Bad usage, or parameters outside a model's domain.
    Usage = 2,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(levysup::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<levysup::Error> for CliError {
    fn from(e: levysup::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// `--seed` if given, else the environment variable, else the built-in default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV} is not an unsigned integer: `{v}`"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn context(cli: &Cli) -> Result<Context, CliError> {
    let mut quad = QuadratureConfig::default();
    if let Some(v) = cli.abs_tol {
        quad.abs_tol = v;
    }
    if let Some(v) = cli.rel_tol {
        quad.rel_tol = v;
    }
    if !quad.is_valid() {
        return Err(CliError::Usage("quadrature tolerances must be positive".into()));
    }
    let seed = match cli.seed {
        Some(s) => s,
        None => resolve_seed(None, std::env::var(SEED_ENV).ok().as_deref())?,
    };
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Ok(Context { quad, seed, workers })
}

fn run_parsed(cli: &Cli, out: &mut dyn Write) -> Result<Exit, CliError> {
    let ctx = context(cli)?;
    let outcome = commands::execute(&cli.command, &ctx)?;
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            outcome.artifact.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => outcome.artifact.write(cli.format, out)?,
    }
    Ok(if outcome.pass { Exit::Success } else { Exit::Failed })
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    Exit::Success
                }
                _ => {
                    let _ = write!(err, "{e}");
                    Exit::Usage
                }
            };
        }
    };
    match run_parsed(&cli, out) {
        Ok(code) => {
            if code == Exit::Failed {
                let _ = writeln!(err, "validation failed: result outside tolerance");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "levysup: {e}");
            Exit::Usage
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(5), Some("7")).unwrap(), 5);
        assert_eq!(resolve_seed(None, Some("7")).unwrap(), 7);
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert!(resolve_seed(None, Some("x")).is_err());
    }
}
