//! Abstract graded filtered Floer–Novikov complexes.
//!
//! A complex is stored in its Γ-quotient presentation: finitely many orbit
//! generators, each with an action and a degree, a period lattice `ω: Zʳ → Q`
//! and a differential whose entries are Novikov scalars. The level of a
//! chain `Σ a_x ⟨x⟩` is `max(v_q(a_x) + A(x))`, and the spectral number of a
//! class is the least level over its representatives.

mod axioms;
pub(crate) mod json;
mod lattice;
pub mod random;
mod reduce;
mod spectrum;
mod tensor;
mod validate;

use std::collections::BTreeMap;

use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{ExtRational, Q};

pub use axioms::{check_shift, check_spectrality, verify_spectral_axioms, AxiomCheck, AxiomReport};
pub use json::check_version;
pub use lattice::PeriodLattice;
pub use reduce::{Grading, HomologyRanks, ReducedComplex};
pub use spectrum::Spectrum;
pub use tensor::{kunneth_convolution, tensor_product};
pub use validate::{ValidationReport, Violation};

/// Working floor used when a complex does not declare one.
pub const DEFAULT_FLOOR: i64 = -64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitGenerator {
    pub id: String,
    pub action: Q,
    pub degree: i64,
}

impl OrbitGenerator {
    pub fn new(id: impl Into<String>, action: Q, degree: i64) -> Self {
        Self { id: id.into(), action, degree }
    }
}

/// Coefficient of `⟨to⟩` in `δ⟨from⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialEntry<C> {
    pub from: String,
    pub to: String,
    pub coeff: NovikovScalar<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex<C> {
    pub lattice: PeriodLattice,
    pub generators: Vec<OrbitGenerator>,
    pub differential: Vec<DifferentialEntry<C>>,
    /// Coefficient exponents below this are discarded during reduction.
    pub floor: ExtRational,
}

/// A chain `Σ a_x ⟨x⟩`, keyed by generator id. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainVector<C> {
    coeffs: BTreeMap<String, NovikovScalar<C>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplexError {
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("chain is not closed: its boundary has level {0}")]
    NotClosed(ExtRational),
    #[error("malformed complex: {0}")]
    Malformed(String),
}

/// Outcome of a spectral-number query.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectral<C> {
    Finite(SpectralResult<C>),
    /// The class is zero; its spectral number is −∞.
    NegInfinity,
}

impl<C> Spectral<C> {
    pub fn value(&self) -> ExtRational {
        match self {
            Spectral::Finite(r) => ExtRational::Finite(r.value.clone()),
            Spectral::NegInfinity => ExtRational::NegInfinity,
        }
    }

    pub fn finite(&self) -> Option<&SpectralResult<C>> {
        match self {
            Spectral::Finite(r) => Some(r),
            Spectral::NegInfinity => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult<C> {
    pub value: Q,
    /// A representative of the class attaining `value`.
    pub witness_cycle: ChainVector<C>,
    /// `(generator, lattice vector)` with `action − ω(vector) = value`, when
    /// the value lies in the action spectrum.
    pub spectrality_witness: Option<(String, Vec<i64>)>,
}

impl<C: Coefficient> ChainVector<C> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, NovikovScalar<C>)>) -> Self {
        let mut v = Self::zero();
        for (id, c) in pairs {
            v.add_term(&id, &c);
        }
        v
    }

    pub fn basis(id: impl Into<String>) -> Self {
        Self::from_pairs([(id.into(), NovikovScalar::one())])
    }

    pub fn add_term(&mut self, id: &str, c: &NovikovScalar<C>) {
        let sum = match self.coeffs.get(id) {
            Some(prev) => prev + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(id);
        } else {
            self.coeffs.insert(id.to_string(), sum);
        }
    }

    pub fn get(&self, id: &str) -> Option<&NovikovScalar<C>> {
        self.coeffs.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &NovikovScalar<C>)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, lambda: &NovikovScalar<C>) -> Self {
        Self::from_pairs(self.coeffs.iter().map(|(id, c)| (id.clone(), lambda * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (id, c) in &other.coeffs {
            out.add_term(id, c);
        }
        out
    }

    /// `a ⊗ b` with generator ids joined as in [`tensor_product`].
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (x, a) in &self.coeffs {
            for (y, b) in &other.coeffs {
                out.add_term(&tensor::pair_id(x, y), &(a * b));
            }
        }
        out
    }
}

impl<C: Coefficient> FilteredComplex<C> {
    pub fn new(
        lattice: PeriodLattice,
        generators: Vec<OrbitGenerator>,
        differential: Vec<DifferentialEntry<C>>,
        floor: ExtRational,
    ) -> Self {
        Self { lattice, generators, differential, floor }
    }

    pub fn generator(&self, id: &str) -> Option<&OrbitGenerator> {
        self.generators.iter().find(|g| g.id == id)
    }

    /// Floor used for reductions: the declared one, or [`DEFAULT_FLOOR`].
    pub fn working_floor(&self) -> ExtRational {
        match &self.floor {
            ExtRational::NegInfinity => ExtRational::Finite(crate::rational::qi(DEFAULT_FLOOR)),
            f => f.clone(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// Max over the support of `v_q(coefficient) + action`; −∞ for zero.
    pub fn level(&self, v: &ChainVector<C>) -> Result<ExtRational, ComplexError> {
        let mut best = ExtRational::NegInfinity;
        for (id, c) in v.iter() {
            let g = self.generator(id).ok_or_else(|| ComplexError::UnknownGenerator(id.clone()))?;
            best = best.max(&c.valuation() + &g.action);
        }
        Ok(best)
    }

    /// Applies the differential (no truncation beyond the coefficients' own floors).
    pub fn boundary(&self, v: &ChainVector<C>) -> Result<ChainVector<C>, ComplexError> {
        for id in v.coeffs.keys() {
            if self.generator(id).is_none() {
                return Err(ComplexError::UnknownGenerator(id.clone()));
            }
        }
        let mut out = ChainVector::zero();
        for e in &self.differential {
            if let Some(a) = v.get(&e.from) {
                out.add_term(&e.to, &(a * &e.coeff));
            }
        }
        Ok(out)
    }

    pub fn reduced(&self) -> Result<ReducedComplex<C>, ComplexError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(ComplexError::Invalid(report));
        }
        Ok(ReducedComplex::new(self))
    }

    pub fn homology_rank(&self) -> Result<HomologyRanks, ComplexError> {
        Ok(self.reduced()?.homology())
    }

    pub fn spectral_number(&self, class: &ChainVector<C>) -> Result<Spectral<C>, ComplexError> {
        self.reduced()?.spectral_number(class)
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of(self)
    }
}

#[cfg(test)]
mod tests;
