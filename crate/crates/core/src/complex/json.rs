//! JSON encoding of complexes and chains.
//!
//! ```json
//! {"version": 1,
//!  "lattice": {"rank": 1, "periods": ["1"]},
//!  "generators": [{"id": "x", "action": "1/2", "degree": 0}],
//!  "differential": [{"from": "y", "to": "x", "coeff": [{"c": "1", "exp": "-1"}]}],
//!  "floor": "-20"}
//! ```
//!
//! A chain is an object mapping generator ids to Novikov scalars, optionally
//! wrapped as `{"chain": {...}}`.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{ChainVector, ComplexError, DifferentialEntry, FilteredComplex, OrbitGenerator, PeriodLattice};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{format_q, value_to_q, ExtRational};
use crate::SCHEMA_VERSION;

/// Rejects documents that declare a schema version other than the current one.
pub fn check_version(v: &Value) -> Result<(), String> {
    match v.get("version") {
        None => Ok(()),
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(format!("unsupported schema version {other} (expected {SCHEMA_VERSION})")),
    }
}

impl<C: Coefficient> FilteredComplex<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "version": SCHEMA_VERSION,
            "lattice": {
                "rank": self.lattice.rank(),
                "periods": self.lattice.periods.iter().map(format_q).collect::<Vec<_>>(),
            },
            "generators": self.generators.iter().map(|g| json!({
                "id": g.id, "action": format_q(&g.action), "degree": g.degree,
            })).collect::<Vec<_>>(),
            "differential": self.differential.iter().map(|e| {
                let mut m = Map::new();
                m.insert("from".into(), Value::String(e.from.clone()));
                m.insert("to".into(), Value::String(e.to.clone()));
                let c = e.coeff.to_json();
                if e.coeff.is_exact() {
                    m.insert("coeff".into(), c["terms"].clone());
                } else {
                    m.insert("coeff".into(), c);
                }
                Value::Object(m)
            }).collect::<Vec<_>>(),
            "floor": serde_json::to_value(&self.floor).expect("floor encodes"),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let bad = |s: String| ComplexError::Malformed(s);
        check_version(v).map_err(bad)?;
        let lattice = match v.get("lattice") {
            None | Some(Value::Null) => PeriodLattice::trivial(),
            Some(l) => {
                let periods = match l.get("periods") {
                    None => Vec::new(),
                    Some(p) => p
                        .as_array()
                        .ok_or_else(|| bad("lattice.periods must be a list".into()))?
                        .iter()
                        .map(value_to_q)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(bad)?,
                };
                if let Some(r) = l.get("rank") {
                    let r = r.as_u64().ok_or_else(|| bad("lattice.rank must be a nonnegative integer".into()))?;
                    if r as usize != periods.len() {
                        return Err(bad(format!("lattice rank {r} but {} periods", periods.len())));
                    }
                }
                PeriodLattice::new(periods)
            }
        };
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing generator list".into()))?;
        let mut generators = Vec::with_capacity(gens.len());
        for g in gens {
            let id = g.get("id").and_then(Value::as_str).ok_or_else(|| bad("generator without id".into()))?;
            let action = value_to_q(g.get("action").ok_or_else(|| bad(format!("generator {id} without action")))?)
                .map_err(bad)?;
            let degree = g
                .get("degree")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad(format!("generator {id} without integer degree")))?;
            generators.push(OrbitGenerator::new(id, action, degree));
        }
        let mut differential = Vec::new();
        if let Some(d) = v.get("differential") {
            for e in d.as_array().ok_or_else(|| bad("differential must be a list".into()))? {
                let field = |k: &str| {
                    e.get(k)
                        .and_then(Value::as_str)
                        .map(str::to_string)
                        .ok_or_else(|| bad(format!("differential entry without {k}")))
                };
                let coeff = NovikovScalar::from_json(e.get("coeff").ok_or_else(|| bad("entry without coeff".into()))?)
                    .map_err(bad)?;
                differential.push(DifferentialEntry { from: field("from")?, to: field("to")?, coeff });
            }
        }
        let floor = match v.get("floor") {
            None => ExtRational::NegInfinity,
            Some(f) => serde_json::from_value(f.clone()).map_err(|e| bad(e.to_string()))?,
        };
        Ok(Self::new(lattice, generators, differential, floor))
    }
}

impl<C: Coefficient> ChainVector<C> {
    pub fn to_json(&self) -> Value {
        Value::Object(self.iter().map(|(id, c)| (id.clone(), c.to_json())).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        check_version(v)?;
        let body = v.get("chain").unwrap_or(v);
        let m = body.as_object().ok_or("chain must be an object of id → scalar")?;
        let mut out = Self::zero();
        for (id, c) in m {
            if id == "version" {
                continue;
            }
            out.add_term(id, &NovikovScalar::from_json(c)?);
        }
        Ok(out)
    }
}

impl<C: Coefficient> Serialize for FilteredComplex<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for FilteredComplex<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(de::Error::custom)
    }
}

impl<C: Coefficient> Serialize for ChainVector<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for ChainVector<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(de::Error::custom)
    }
}
