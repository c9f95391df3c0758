//! Command-line front end for `relquant-core`.
//!
//! Every subcommand produces one or more named outputs. They go to the
//! output directory when one is configured (flag, then
//! [`config::OUT_DIR_ENV`], then the run config) and to standard output
//! otherwise. Exit codes: 0 success, 1 failed `verify`, 2 bad input.

pub mod commands;
pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use commands::Output;
use config::{ConfigError, RunConfig, OUT_DIR_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "relquant", version, about = "Cone-smeared relativistic quantization numerics")]
pub struct Cli {
    /// JSON run configuration; every field is optional.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides the environment and the run config.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// 2×2 representation and spin class for each p.
    Algebra(commands::AlgebraArgs),
    /// Berezin-Toeplitz matrix of a polynomial symbol.
    Toeplitz(commands::ToeplitzArgs),
    /// λ and μ on an (s, ρ) grid.
    Lambda(commands::GridArgs),
    /// Same table as `lambda`.
    Mu(commands::GridArgs),
    /// Convergence of λ(tξ)/t² to the leading term.
    Asymptotics(commands::AsymptoticsArgs),
    /// Range of 1 - μ and finite-section eigenvalues.
    Spectrum(commands::SpectrumArgs),
    /// Evolves the configured wave packet.
    Evolve(commands::EvolveArgs),
    /// Runs the acceptance suite.
    Verify(commands::VerifyArgs),
}

/// What a finished command hands back besides its outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerifyFailed,
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerics(relquant_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Numerics(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<relquant_core::Error> for RunError {
    fn from(e: relquant_core::Error) -> Self {
        RunError::Numerics(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Runs the tool on `argv` (including the program name) against the real
/// standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_BAD_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute_cli(&cli, out) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::VerifyFailed) => EXIT_VERIFY_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_BAD_INPUT
        }
    }
}

fn execute_cli(cli: &Cli, out: &mut dyn Write) -> Result<Status, RunError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| config.output_dir.clone());
    let (outputs, status) = commands::execute(&cli.command, &config)?;
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            for o in &outputs {
                std::fs::write(dir.join(&o.name), &o.body)?;
            }
            if let Command::Verify(_) = cli.command {
                // The pass/fail lines are also shown when writing files.
                out.write_all(outputs[0].body.as_bytes())?;
            }
        }
        None => {
            for o in &outputs {
                out.write_all(o.body.as_bytes())?;
            }
        }
    }
    Ok(status)
}

/// Runs `argv` against an explicit config and returns all outputs
/// concatenated, without touching the file system.
pub fn render(argv: &[&str], config: &RunConfig) -> Result<String, RunError> {
    let cli = Cli::try_parse_from(argv).map_err(|e| RunError::Config(ConfigError(e.to_string())))?;
    let (outputs, _) = commands::execute(&cli.command, config)?;
    Ok(outputs.iter().map(|o| o.body.as_str()).collect())
}
