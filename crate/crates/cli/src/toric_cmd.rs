use std::path::PathBuf;

use clap::Subcommand;
use serde_json::{json, Value};
use vortex_core::rational::format_q;
use vortex_core::toric::{
    certify_heavy, critical_points_leading, scan_csv, scan_fibers, HeavinessCertificate, MomentPolytope,
    PotentialFunction,
};

use crate::io::{invalid, parse_fiber, parse_rational, read_json, CliError, Output};
use crate::Mode;

#[derive(Debug, Subcommand)]
pub enum ToricCmd {
    /// Delzant and boundedness checks.
    Validate {
        #[arg(long)]
        polytope: PathBuf,
    },
    /// The potential of a fiber and its leading system.
    Potential(FiberArgs),
    /// Roots of the leading critical-point system.
    Critical(FiberArgs),
    /// Lift critical branes and emit a heaviness certificate.
    Certify {
        #[command(flatten)]
        fiber: FiberArgs,
        #[command(flatten)]
        lift: LiftArgs,
    },
    /// Certify every interior point of the 1/k grid.
    Scan {
        #[arg(long)]
        polytope: PathBuf,
        /// Grid denominator k.
        #[arg(long)]
        grid: u32,
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Re-check a certificate from its serialized form alone.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct FiberArgs {
    #[arg(long)]
    pub polytope: PathBuf,
    /// Comma-separated rational coordinates, e.g. 1/2,1/3.
    #[arg(long)]
    pub fiber: String,
}

#[derive(Debug, clap::Args)]
pub struct LiftArgs {
    /// Novikov truncation order of the lift.
    #[arg(long, default_value = "-10", allow_hyphen_values = true)]
    order: String,
    #[arg(long, value_enum, default_value_t = Mode::Gaussian)]
    mode: Mode,
}

pub fn load_polytope(path: &PathBuf) -> Result<MomentPolytope, CliError> {
    serde_json::from_value(read_json(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

impl FiberArgs {
    pub fn potential(&self) -> Result<(MomentPolytope, Vec<vortex_core::rational::Q>, PotentialFunction), CliError> {
        let p = load_polytope(&self.polytope)?;
        let report = p.validate();
        if !report.is_valid() {
            return Err(invalid(format!("invalid polytope: {}", serde_json::to_string(&report.issues).expect("encodes"))));
        }
        let fiber = parse_fiber(&self.fiber)?;
        let w = PotentialFunction::of_fiber(&p, &fiber).map_err(invalid)?;
        Ok((p, fiber, w))
    }
}

pub fn run(cmd: &ToricCmd) -> Result<Output, CliError> {
    match cmd {
        ToricCmd::Validate { polytope } => {
            let p = load_polytope(polytope)?;
            let r = p.validate();
            let ok = r.is_valid();
            Ok(Output::json(
                &json!({"valid": ok, "delzant": r.is_delzant(), "vertices": r.vertices, "issues": r.issues}),
                ok,
            ))
        }
        ToricCmd::Potential(f) => {
            let (_, fiber, w) = f.potential()?;
            Ok(Output::json(
                &json!({
                    "version": vortex_core::SCHEMA_VERSION,
                    "fiber": fiber.iter().map(format_q).collect::<Vec<_>>(),
                    "potential": w,
                    "leading_system": w.leading_system(),
                }),
                true,
            ))
        }
        ToricCmd::Critical(f) => {
            let (_, _, w) = f.potential()?;
            let sol = critical_points_leading(&w);
            Ok(Output::json(&serde_json::to_value(sol).expect("encodes"), true))
        }
        ToricCmd::Certify { fiber, lift } => {
            let (p, l, _) = fiber.potential()?;
            let order = parse_rational(&lift.order)?;
            let out = certify_heavy(&p, &l, &order, lift.mode.into()).map_err(invalid)?;
            Ok(Output::json(&out.to_json(), true))
        }
        ToricCmd::Scan { polytope, grid, lift, format } => {
            let p = load_polytope(polytope)?;
            let order = parse_rational(&lift.order)?;
            let rows = scan_fibers(&p, *grid, &order, lift.mode.into()).map_err(invalid)?;
            Ok(match format {
                Format::Csv => Output::text(scan_csv(&rows)),
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|r| json!({"fiber": r.fiber.iter().map(format_q).collect::<Vec<_>>(), "outcome": r.outcome.to_json()}))
                        .collect();
                    Output::json(&Value::Array(v), true)
                }
            })
        }
        ToricCmd::Verify { certificate } => {
            let cert = HeavinessCertificate::from_json(&read_json(certificate)?).map_err(invalid)?;
            let check = cert.verify().map_err(invalid)?;
            let ok = check.passed;
            Ok(Output::json(&serde_json::to_value(check).expect("encodes"), ok))
        }
    }
}
