//! The `soliton` command: residual evaluation of configured surfaces, closed-form
//! and ODE cross-checks, exact proof replays and residual probes.
//!
//! Exit codes: 0 success, 1 verification failure or expression domain violation,
//! 2 usage, config or I/O error.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command, IntegrateTarget};
use report::{render, write_file};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("replay failed: {0}")]
    Symbolic(#[from] soliton_symbolic::SymbolicError),
    #[error("integration failed: {0}")]
    Ode(#[from] soliton_core::ode::OdeError),
    #[error("probe: {0}")]
    Probe(#[from] soliton_core::probe::ProbeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Symbolic(_) | CliError::Ode(_) => 1,
            CliError::Usage(_)
            | CliError::Config(_)
            | CliError::Read { .. }
            | CliError::Write { .. }
            | CliError::Probe(_) => 2,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut echo = vec!["soliton".to_string()];
    echo.extend(argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()));
    match execute(&cli.command, &echo.join(" ")) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command; prints its transcript and summary and writes `--out`.
pub fn execute(command: &Command, echo: &str) -> Result<i32, CliError> {
    let start = Instant::now();
    let (mut report, output) = match command {
        Command::Residual(a) => (commands::residual(a, echo)?, &a.output),
        Command::Integrate(a) => match &a.target {
            IntegrateTarget::GrimReaper(g) => (commands::grim_reaper(g, echo)?, &g.output),
            IntegrateTarget::Lorentz(l) => (commands::lorentz(l, echo)?, &l.output),
            IntegrateTarget::Bowl(b) => (commands::bowl(b, echo)?, &b.output),
        },
        Command::Verify(a) => (commands::verify(a, echo)?, &a.output),
        Command::Probe(a) => (commands::probe(a, echo)?, &a.output),
        Command::Export(a) => {
            commands::export(a)?;
            return Ok(0);
        }
    };
    report.wall_time_s = start.elapsed().as_secs_f64();
    print!("{}", report.transcript);
    print!("{}", report.summary());
    if let Some(path) = &output.out {
        write_file(path, &render(&report, output.format, None)?)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}
