//! Koszul model of the quasimap Floer complex of a toric fiber with a brane.
//!
//! The chain group has one generator `e_S` per subset `S ⊆ {1..n}`, all at
//! action 0 and degree `|S|`. The differential is contraction with the
//! logarithmic gradient `y_j = x_j ∂W/∂x_j`:
//!
//! `m₁(e_S) = Σ_{j∈S} (−1)^{pos(j,S)} y_j e_{S∖j}`,
//!
//! where `pos(j,S)` counts the elements of `S` smaller than `j`. The ranks are
//! statements about this model, which stands in for the disk-counting
//! differential. Its homology is everything (rank `2ⁿ`) when all `y_j`
//! vanish to the working floor and zero otherwise, since a nonzero Novikov
//! scalar is invertible.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{
    ChainVector, ComplexError, DifferentialEntry, FilteredComplex, OrbitGenerator, PeriodLattice, Spectral,
};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{ExtRational, Q};
use crate::toric::{Brane, PotentialFunction, ToricError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuasimapError {
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Generator id of `e_S` for a sorted 0-based subset: `e{}`, `e{1}`, `e{1,2}`, …
pub fn subset_id(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|j| (j + 1).to_string()).collect();
    format!("e{{{}}}", inner.join(","))
}

fn subset_of(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|j| mask >> j & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasimapComplex<C> {
    pub dim: usize,
    /// Logarithmic gradient at the brane, truncated at `floor`.
    pub y: Vec<NovikovScalar<C>>,
    pub floor: ExtRational,
}

/// Builds the complex of the brane `x` for the potential `w`.
pub fn build_cqf<C: Coefficient>(
    w: &PotentialFunction,
    x: &[NovikovScalar<C>],
    floor: &ExtRational,
) -> Result<QuasimapComplex<C>, QuasimapError> {
    let y = w.log_gradient(x, floor)?;
    Ok(QuasimapComplex { dim: w.dim, y, floor: floor.clone() })
}

/// `W(x)` truncated at `floor`: the central charge of the brane.
pub fn central_charge<C: Coefficient>(
    w: &PotentialFunction,
    x: &[NovikovScalar<C>],
    floor: &ExtRational,
) -> Result<NovikovScalar<C>, QuasimapError> {
    Ok(w.evaluate(x, floor)?)
}

/// Rank of the complex of a certified brane, with every coordinate scaled by `scale`.
pub fn brane_rank(
    w: &PotentialFunction,
    brane: &Brane,
    scale: i64,
    floor: &ExtRational,
) -> Result<QuasimapRank, QuasimapError> {
    fn go<C: Coefficient>(
        w: &PotentialFunction,
        x: &[NovikovScalar<C>],
        scale: i64,
        floor: &ExtRational,
    ) -> Result<QuasimapRank, QuasimapError> {
        let x: Vec<_> = x.iter().map(|xj| xj.scale(&C::from_i64(scale))).collect();
        build_cqf(w, &x, floor)?.hqf_rank()
    }
    match brane {
        Brane::Exact(c) => go(w, &c.x, scale, floor),
        Brane::Numeric(c) => go(w, &c.x, scale, floor),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasimapRank {
    pub rank: usize,
    /// Ranks by degree `|S|`.
    pub by_degree: BTreeMap<i64, usize>,
    /// Ranks by parity of `|S|`.
    pub by_parity: BTreeMap<i64, usize>,
    /// `v_q(y_j)`; −∞ where `y_j` vanishes to the floor.
    pub gradient_valuations: Vec<ExtRational>,
    pub unit_nonzero: bool,
}

impl<C: Coefficient> QuasimapComplex<C> {
    /// All subsets in order of their bit masks.
    pub fn basis(&self) -> Vec<Vec<usize>> {
        (0..1usize << self.dim).map(|m| subset_of(m, self.dim)).collect()
    }

    pub fn is_critical(&self) -> bool {
        self.y.iter().all(NovikovScalar::is_zero)
    }

    /// The complex in the filtered-complex format, with a trivial period lattice.
    pub fn to_filtered(&self) -> FilteredComplex<C> {
        let basis = self.basis();
        let generators = basis
            .iter()
            .map(|s| OrbitGenerator::new(subset_id(s), Q::from_integer(0.into()), s.len() as i64))
            .collect();
        let mut differential = Vec::new();
        for s in &basis {
            for (pos, &j) in s.iter().enumerate() {
                if self.y[j].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = s.iter().copied().filter(|&k| k != j).collect();
                let coeff = if pos % 2 == 0 { self.y[j].clone() } else { self.y[j].neg_ref() };
                differential.push(DifferentialEntry { from: subset_id(s), to: subset_id(&rest), coeff });
            }
        }
        FilteredComplex::new(PeriodLattice::trivial(), generators, differential, self.floor.clone())
    }

    pub fn m1(&self, v: &ChainVector<C>) -> Result<ChainVector<C>, QuasimapError> {
        Ok(self.to_filtered().boundary(v)?)
    }

    /// The generator `e_∅` standing for the Morse maximum; always closed.
    pub fn unit_class(&self) -> ChainVector<C> {
        ChainVector::basis(subset_id(&[]))
    }

    /// Homology of the model, computed by the filtered-complex reduction.
    pub fn hqf_rank(&self) -> Result<QuasimapRank, QuasimapError> {
        let complex = self.to_filtered();
        let reduced = complex.reduced()?;
        let ranks = reduced.homology();
        let mut by_parity = BTreeMap::new();
        for (&d, &r) in &ranks.ranks {
            *by_parity.entry(d.rem_euclid(2)).or_insert(0) += r;
        }
        let unit_nonzero = !matches!(reduced.spectral_number(&self.unit_class())?, Spectral::NegInfinity);
        Ok(QuasimapRank {
            rank: ranks.total(),
            by_degree: ranks.ranks,
            by_parity,
            gradient_valuations: self.y.iter().map(NovikovScalar::valuation).collect(),
            unit_nonzero,
        })
    }
}

#[cfg(test)]
mod tests;
