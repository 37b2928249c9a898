use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{ChainVector, FilteredComplex};
use crate::novikov::Coefficient;
use crate::rational::{format_q, ExtRational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateId { id: String },
    UnknownGenerator { entry: usize, id: String },
    /// `v_q(entry) + A(to) ≥ A(from)`.
    ActionDrop { from: String, to: String, entry_level: String, source_action: String },
    DegreeDrop { from: String, to: String, from_degree: i64, to_degree: i64 },
    /// `δ(δ⟨from⟩)` has a nonzero coefficient on `to` above the floor.
    NonzeroSquare { from: String, to: String, coeff: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {v:?}")?;
        }
        Ok(())
    }
}

pub(super) fn validate<C: Coefficient>(c: &FilteredComplex<C>) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    for g in &c.generators {
        if !seen.insert(g.id.as_str()) {
            violations.push(Violation::DuplicateId { id: g.id.clone() });
        }
    }
    let by_id: BTreeMap<&str, _> = c.generators.iter().map(|g| (g.id.as_str(), g)).collect();

    let mut structural_ok = true;
    for (i, e) in c.differential.iter().enumerate() {
        for id in [&e.from, &e.to] {
            if !by_id.contains_key(id.as_str()) {
                violations.push(Violation::UnknownGenerator { entry: i, id: id.clone() });
                structural_ok = false;
            }
        }
    }
    if !structural_ok {
        return ValidationReport { violations };
    }

    for e in &c.differential {
        if e.coeff.is_zero() {
            continue;
        }
        let (src, tgt) = (by_id[e.from.as_str()], by_id[e.to.as_str()]);
        let entry_level = &e.coeff.valuation() + &tgt.action;
        if entry_level >= ExtRational::Finite(src.action.clone()) {
            violations.push(Violation::ActionDrop {
                from: e.from.clone(),
                to: e.to.clone(),
                entry_level: entry_level.to_string(),
                source_action: format_q(&src.action),
            });
        }
        if (src.degree - tgt.degree).rem_euclid(2) != 1 {
            violations.push(Violation::DegreeDrop {
                from: e.from.clone(),
                to: e.to.clone(),
                from_degree: src.degree,
                to_degree: tgt.degree,
            });
        }
    }

    let floor = c.working_floor();
    for g in &c.generators {
        let once = c.boundary(&ChainVector::basis(g.id.clone())).expect("ids checked");
        let twice = c.boundary(&once).expect("ids checked");
        for (to, coeff) in twice.iter() {
            let residue = coeff.truncate(&floor);
            if !residue.is_zero() {
                violations.push(Violation::NonzeroSquare {
                    from: g.id.clone(),
                    to: to.clone(),
                    coeff: residue.to_json().to_string(),
                });
            }
        }
    }
    ValidationReport { violations }
}
