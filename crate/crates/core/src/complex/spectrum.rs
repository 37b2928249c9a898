use serde::Serialize;

use super::{FilteredComplex, PeriodLattice};
use crate::novikov::Coefficient;
use crate::rational::{format_q, Q};

/// The action spectrum `{A(x) − ω(v)}` as base values plus the period lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    /// `(generator id, action)`, sorted by action then id.
    pub base: Vec<(String, Q)>,
    pub lattice: PeriodLattice,
}

impl Spectrum {
    pub fn of<C: Coefficient>(c: &FilteredComplex<C>) -> Self {
        let mut base: Vec<(String, Q)> = c.generators.iter().map(|g| (g.id.clone(), g.action.clone())).collect();
        base.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Self { base, lattice: c.lattice.clone() }
    }

    /// A generator and lattice vector realising `value`, if it lies in the spectrum.
    pub fn witness(&self, value: &Q) -> Option<(String, Vec<i64>)> {
        self.base
            .iter()
            .find_map(|(id, a)| self.lattice.solve(&(a - value)).map(|v| (id.clone(), v)))
    }

    pub fn contains(&self, value: &Q) -> bool {
        self.witness(value).is_some()
    }

    /// Distinct base values reduced modulo the period group.
    pub fn residues(&self) -> Vec<Q> {
        let step = self.lattice.step();
        let mut out: Vec<Q> = Vec::new();
        for (_, a) in &self.base {
            let r = if step == Q::from_integer(0.into()) {
                a.clone()
            } else {
                a - (a / &step).floor() * &step
            };
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out.sort();
        out
    }

    pub fn describe(&self) -> SpectrumDescription {
        let step = self.lattice.step();
        SpectrumDescription {
            residues: self.residues().iter().map(format_q).collect(),
            step: format_q(&step),
            base: self.base.iter().map(|(id, a)| (id.clone(), format_q(a))).collect(),
            periods: self.lattice.periods.iter().map(format_q).collect(),
        }
    }
}

/// Serializable form: the spectrum is `residues + step·Z` (a finite set when step is 0).
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumDescription {
    pub residues: Vec<String>,
    pub step: String,
    pub base: Vec<(String, String)>,
    pub periods: Vec<String>,
}
