//! `vortex`: batch front end for the vortex-core library.
//!
//! Exit status: 0 on success, 1 when arguments or input are malformed or a
//! check fails, 2 on I/O errors.

mod complex_cmd;
mod io;
mod qmap_cmd;
mod qstate_cmd;
mod toric_cmd;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vortex_core::novikov::CoefficientMode;
use vortex_core::selftest::{selftest, SelftestConfig, DEFAULT_SEED};

use io::{CliError, Output};

#[derive(Debug, Parser)]
#[command(name = "vortex", version, about = "Spectral invariants, toric heaviness certificates and quasi-state checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Filtered Floer–Novikov complexes.
    #[command(subcommand)]
    Complex(complex_cmd::ComplexCmd),
    /// Moment polytopes, potentials and heaviness certificates.
    #[command(subcommand)]
    Toric(toric_cmd::ToricCmd),
    /// Koszul model of quasimap Floer cohomology.
    #[command(subcommand)]
    Qmap(qmap_cmd::QmapCmd),
    /// Homogenization and quasi-state axioms.
    #[command(subcommand)]
    Qstate(qstate_cmd::QstateCmd),
    /// Seeded property suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Corrupt every random differential; the run must then fail.
        #[arg(long)]
        mutate: bool,
        #[arg(long, default_value_t = 200)]
        complexes: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Rational,
    Gaussian,
    Complex,
}

impl From<Mode> for CoefficientMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Rational => CoefficientMode::Rational,
            Mode::Gaussian => CoefficientMode::Gaussian,
            Mode::Complex => CoefficientMode::Complex,
        }
    }
}

/// Runs `$body` with `$c` bound to the coefficient type of `$mode`.
#[macro_export]
macro_rules! with_mode {
    ($mode:expr, $c:ident => $body:expr) => {
        match $mode {
            $crate::Mode::Rational => {
                type $c = vortex_core::rational::Q;
                $body
            }
            $crate::Mode::Gaussian => {
                type $c = vortex_core::novikov::GaussianRational;
                $body
            }
            $crate::Mode::Complex => {
                type $c = vortex_core::novikov::ComplexFloat;
                $body
            }
        }
    };
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Complex(c) => complex_cmd::run(c),
        Command::Toric(c) => toric_cmd::run(c),
        Command::Qmap(c) => qmap_cmd::run(c),
        Command::Qstate(c) => qstate_cmd::run(c),
        Command::Selftest { seed, mutate, complexes, pairs } => {
            let cfg = SelftestConfig { seed: *seed, mutate: *mutate, complexes: *complexes, pairs: *pairs, ..Default::default() };
            let report = selftest(&cfg);
            for line in report.summary_lines() {
                eprintln!("{line}");
            }
            Ok(Output::json(&report.to_json(), report.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
            None => std::io::stdout().write_all(out.body.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
