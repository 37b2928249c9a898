use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Subcommand;
use serde::Deserialize;
use serde_json::{json, Value};
use vortex_core::quasistate::{
    check_partial_quasistate, check_prequasimorphism, heaviness_check, homogenize, infer_product_heaviness,
    mu_from_oracle, FunctionalTable, GroupRelation, Real, Relation, SpectralOracle, SplitPair, FLOAT_TOL,
};

use crate::io::{invalid, parse_rational, read_json, CliError, Output};

#[derive(Debug, Subcommand)]
pub enum QstateCmd {
    /// ζ = −lim c_n/n from an oracle; with --vol also μ = vol·lim c_n/n.
    Homogenize {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        vol: Option<String>,
    },
    /// Check the quasi-state or pre-quasimorphism axioms on a table.
    Check {
        #[arg(long)]
        table: PathBuf,
    },
    /// Test ζ(H) ≤ sup_Y H on a table of functions.
    Heavy {
        #[arg(long)]
        table: PathBuf,
    },
    /// Additivity on split functions of a product.
    Product {
        #[arg(long)]
        table: PathBuf,
    },
}

#[derive(Deserialize)]
#[serde(tag = "functional", rename_all = "snake_case")]
enum CheckInput {
    Quasistate { values: FunctionalTable, relations: Vec<Relation> },
    Prequasimorphism { values: FunctionalTable, relations: Vec<GroupRelation> },
}

#[derive(Deserialize)]
struct HeavyInput {
    subset: String,
    values: FunctionalTable,
    sups: BTreeMap<String, Real>,
}

#[derive(Deserialize)]
struct FactorHeaviness {
    subset: String,
    sups: BTreeMap<String, Real>,
}

#[derive(Deserialize)]
struct ProductInput {
    zeta0: FunctionalTable,
    zeta1: FunctionalTable,
    zeta: FunctionalTable,
    pairs: Vec<SplitPair>,
    #[serde(default)]
    heaviness: Option<[FactorHeaviness; 2]>,
}

fn parse<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, CliError> {
    let mut v = read_json(path)?;
    if let Value::Object(m) = &mut v {
        m.remove("version");
    }
    serde_json::from_value(v).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn encode<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("encodes")
}

pub fn run(cmd: &QstateCmd) -> Result<Output, CliError> {
    match cmd {
        QstateCmd::Homogenize { oracle, vol } => {
            let o = SpectralOracle::from_json(&read_json(oracle)?).map_err(invalid)?;
            let zeta = homogenize(&o).map_err(invalid)?;
            let mut out = json!({"version": vortex_core::SCHEMA_VERSION, "zeta": zeta});
            if let Some(v) = vol {
                out["mu"] = encode(&mu_from_oracle(&o, &parse_rational(v)?).map_err(invalid)?);
            }
            Ok(Output::json(&out, true))
        }
        QstateCmd::Check { table } => {
            let report = match parse::<CheckInput>(table)? {
                CheckInput::Quasistate { values, relations } => check_partial_quasistate(&values, &relations, FLOAT_TOL),
                CheckInput::Prequasimorphism { values, relations } => {
                    check_prequasimorphism(&values, &relations, FLOAT_TOL)
                }
            }
            .map_err(invalid)?;
            Ok(Output::json(&encode(&report), report.passed))
        }
        QstateCmd::Heavy { table } => {
            let h: HeavyInput = parse(table)?;
            let report = heaviness_check(&h.values, &h.subset, &h.sups, FLOAT_TOL).map_err(invalid)?;
            Ok(Output::json(&json!({"heavy": report.is_heavy(), "report": report}), true))
        }
        QstateCmd::Product { table } => {
            let p: ProductInput = parse(table)?;
            let report = vortex_core::quasistate::product_quasistate_check(&p.zeta0, &p.zeta1, &p.zeta, &p.pairs, FLOAT_TOL)
                .map_err(invalid)?;
            let mut out = json!({"additivity": report});
            if let Some([h0, h1]) = &p.heaviness {
                let r0 = heaviness_check(&p.zeta0, &h0.subset, &h0.sups, FLOAT_TOL).map_err(invalid)?;
                let r1 = heaviness_check(&p.zeta1, &h1.subset, &h1.sups, FLOAT_TOL).map_err(invalid)?;
                out["product_heaviness"] = encode(&infer_product_heaviness(&r0, &r1));
            }
            let ok = out["additivity"]["passed"] == json!(true);
            Ok(Output::json(&out, ok))
        }
    }
}
