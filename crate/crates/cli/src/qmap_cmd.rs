use std::path::PathBuf;

use clap::Subcommand;
use serde_json::{json, Value};
use vortex_core::novikov::{Coefficient, NovikovScalar};
use vortex_core::quasimap::{build_cqf, central_charge};
use vortex_core::rational::ExtRational;
use vortex_core::toric::{Brane, HeavinessCertificate, PotentialFunction};

use crate::io::{invalid, parse_floor, read_json, CliError, Output};
use crate::toric_cmd::FiberArgs;
use crate::{with_mode, Mode};

#[derive(Debug, Subcommand)]
pub enum QmapCmd {
    /// Homology rank of the Koszul model at each brane.
    Rank(QmapArgs),
    /// The unit chain and whether it survives in homology.
    Unit(QmapArgs),
    /// The central charge W(x).
    Charge(QmapArgs),
}

#[derive(Debug, clap::Args)]
pub struct QmapArgs {
    /// Take the fiber and branes from a heaviness certificate.
    #[arg(long, conflicts_with_all = ["polytope", "fiber", "brane"])]
    certificate: Option<PathBuf>,
    #[arg(long, requires_all = ["fiber", "brane"])]
    polytope: Option<PathBuf>,
    #[arg(long)]
    fiber: Option<String>,
    /// JSON list of Novikov scalars, one per coordinate.
    #[arg(long)]
    brane: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Gaussian)]
    mode: Mode,
    /// Multiply every coordinate by this integer first.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    scale: i64,
    /// Working floor; defaults to the certificate order, else -10.
    #[arg(long, allow_hyphen_values = true)]
    floor: Option<String>,
}

enum Which {
    Rank,
    Unit,
    Charge,
}

fn one<C: Coefficient>(
    which: &Which,
    w: &PotentialFunction,
    x: &[NovikovScalar<C>],
    scale: i64,
    floor: &ExtRational,
) -> Result<Value, CliError> {
    let x: Vec<_> = x.iter().map(|xj| xj.scale(&C::from_i64(scale))).collect();
    Ok(match which {
        Which::Rank => serde_json::to_value(build_cqf(w, &x, floor).and_then(|c| c.hqf_rank()).map_err(invalid)?)
            .expect("encodes"),
        Which::Unit => {
            let c = build_cqf(w, &x, floor).map_err(invalid)?;
            let r = c.hqf_rank().map_err(invalid)?;
            json!({"unit_class": c.unit_class().to_json(), "closed": c.m1(&c.unit_class()).map_err(invalid)?.is_zero(), "nonzero_in_homology": r.unit_nonzero})
        }
        Which::Charge => central_charge(w, &x, floor).map_err(invalid)?.to_json(),
    })
}

fn from_file<C: Coefficient>(
    which: &Which,
    w: &PotentialFunction,
    path: &PathBuf,
    scale: i64,
    floor: &ExtRational,
) -> Result<Value, CliError> {
    let v = read_json(path)?;
    let coords = v.get("x").unwrap_or(&v).as_array().ok_or_else(|| invalid("brane must be a list of scalars"))?;
    let x = coords.iter().map(NovikovScalar::<C>::from_json).collect::<Result<Vec<_>, _>>().map_err(invalid)?;
    one(which, w, &x, scale, floor)
}

fn run_with(which: Which, a: &QmapArgs) -> Result<Output, CliError> {
    let explicit_floor = a.floor.as_deref().map(parse_floor).transpose()?;
    let results = if let Some(path) = &a.certificate {
        let cert = HeavinessCertificate::from_json(&read_json(path)?).map_err(invalid)?;
        let w = cert.potential().map_err(invalid)?;
        let floor = explicit_floor.unwrap_or(ExtRational::Finite(cert.order.clone()));
        cert.branes
            .iter()
            .map(|b| match b {
                Brane::Exact(c) => one(&which, &w, &c.x, a.scale, &floor),
                Brane::Numeric(c) => one(&which, &w, &c.x, a.scale, &floor),
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let (Some(polytope), Some(fiber), Some(brane)) = (&a.polytope, &a.fiber, &a.brane) else {
            return Err(invalid("give --certificate, or --polytope with --fiber and --brane"));
        };
        let (_, _, w) = FiberArgs { polytope: polytope.clone(), fiber: fiber.clone() }.potential()?;
        let floor = explicit_floor.unwrap_or(ExtRational::Finite(vortex_core::rational::qi(-10)));
        vec![with_mode!(a.mode, C => from_file::<C>(&which, &w, brane, a.scale, &floor))?]
    };
    Ok(Output::json(&json!({"version": vortex_core::SCHEMA_VERSION, "branes": results}), true))
}

pub fn run(cmd: &QmapCmd) -> Result<Output, CliError> {
    match cmd {
        QmapCmd::Rank(a) => run_with(Which::Rank, a),
        QmapCmd::Unit(a) => run_with(Which::Unit, a),
        QmapCmd::Charge(a) => run_with(Which::Charge, a),
    }
}
