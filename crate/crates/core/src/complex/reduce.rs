//! Filtered reduction over the Novikov field.
//!
//! The leading generator of a chain is the one of maximal level; ties go to
//! the smaller id. Boundary columns are reduced until their leading
//! generators are pairwise distinct. A basis of `im δ` with distinct leads is
//! orthogonal for the level function, so cancelling leading terms of a cycle
//! against it reaches a representative of minimal level.
//!
//! Arithmetic is exact; terms whose exponent falls below the working floor
//! are cut. The floor is the larger of the complex's working floor and the
//! truncation floors of its differential entries.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{ChainVector, ComplexError, FilteredComplex, PeriodLattice, Spectral, SpectralResult};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{ExtRational, Q};

type Sparse<C> = BTreeMap<usize, NovikovScalar<C>>;

const STEP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// Every differential entry lowers the degree by exactly one.
    Integer,
    /// Only the parity of the degree is respected.
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyRanks {
    pub grading: Grading,
    /// Rank per degree (or per parity 0/1).
    pub ranks: BTreeMap<i64, usize>,
    /// Generators whose pivot coefficient was within ten zero thresholds.
    pub near_threshold_pivots: Vec<String>,
}

impl HomologyRanks {
    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }
}

/// A validated complex with its boundary columns already reduced.
#[derive(Debug, Clone)]
pub struct ReducedComplex<C> {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    actions: Vec<Q>,
    degrees: Vec<i64>,
    lattice: PeriodLattice,
    floor: ExtRational,
    columns: Vec<Sparse<C>>,
    /// Leading generator → reduced boundary with that lead.
    pivots: BTreeMap<usize, Sparse<C>>,
    /// Source generator of each nonzero reduced column.
    pivot_sources: Vec<usize>,
    near_threshold: Vec<usize>,
    grading: Grading,
}

impl<C: Coefficient> ReducedComplex<C> {
    pub(super) fn new(c: &FilteredComplex<C>) -> Self {
        let mut order: Vec<&super::OrbitGenerator> = c.generators.iter().collect();
        order.sort_by(|a, b| a.id.cmp(&b.id));
        let ids: Vec<String> = order.iter().map(|g| g.id.clone()).collect();
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let actions = order.iter().map(|g| g.action.clone()).collect();
        let degrees: Vec<i64> = order.iter().map(|g| g.degree).collect();
        let floor = c
            .differential
            .iter()
            .fold(c.working_floor(), |f, e| f.max(e.coeff.floor().clone()));

        let mut columns: Vec<Sparse<C>> = vec![Sparse::new(); ids.len()];
        let mut grading = Grading::Integer;
        for e in &c.differential {
            let (s, t) = (index[&e.from], index[&e.to]);
            if e.coeff.is_zero() {
                continue;
            }
            if degrees[s] - degrees[t] != 1 {
                grading = Grading::Parity;
            }
            add_into(&mut columns[s], t, &e.coeff, &floor);
        }

        let mut this = Self {
            ids,
            index,
            actions,
            degrees,
            lattice: c.lattice.clone(),
            floor,
            columns,
            pivots: BTreeMap::new(),
            pivot_sources: Vec::new(),
            near_threshold: Vec::new(),
            grading,
        };
        this.reduce_columns();
        this
    }

    fn reduce_columns(&mut self) {
        for j in 0..self.columns.len() {
            let mut col = self.columns[j].clone();
            let mut steps = 0;
            while let Some((_, g)) = self.lead(&col) {
                match self.pivots.get(&g) {
                    Some(p) => {
                        col = self.cancel(&col, g, p);
                        steps += 1;
                        assert!(steps < STEP_LIMIT, "column reduction did not terminate");
                    }
                    None => {
                        if col[&g].leading_term().is_some_and(|t| t.coeff.near_threshold()) {
                            self.near_threshold.push(g);
                        }
                        self.pivots.insert(g, col);
                        self.pivot_sources.push(j);
                        break;
                    }
                }
            }
        }
    }

    /// `(level, generator)` of the leading term; ties favour the smaller id.
    fn lead(&self, v: &Sparse<C>) -> Option<(ExtRational, usize)> {
        v.iter()
            .map(|(&g, c)| (&c.valuation() + &self.actions[g], g))
            .max_by(|a, b| (&a.0, Reverse(a.1)).cmp(&(&b.0, Reverse(b.1))))
    }

    /// `v − μ·p` with the monomial `μ` that kills the leading term of `v` at `g`.
    fn cancel(&self, v: &Sparse<C>, g: usize, p: &Sparse<C>) -> Sparse<C> {
        let a = v[&g].leading_term().expect("lead is nonzero");
        let b = p[&g].leading_term().expect("pivot is nonzero");
        let mu = NovikovScalar::monomial(
            a.coeff.clone() * b.coeff.inv().expect("pivot coefficient is nonzero"),
            &a.exp - &b.exp,
        );
        let mut out = v.clone();
        for (&k, c) in p {
            add_into(&mut out, k, &(&mu * c).neg_ref(), &self.floor);
        }
        out
    }

    fn reduce_vector(&self, mut v: Sparse<C>) -> Sparse<C> {
        let mut steps = 0;
        while let Some((_, g)) = self.lead(&v) {
            let Some(p) = self.pivots.get(&g) else { break };
            v = self.cancel(&v, g, p);
            steps += 1;
            assert!(steps < STEP_LIMIT, "cycle reduction did not terminate");
        }
        v
    }

    fn to_sparse(&self, v: &ChainVector<C>) -> Result<Sparse<C>, ComplexError> {
        let mut out = Sparse::new();
        for (id, c) in v.iter() {
            let &i = self.index.get(id).ok_or_else(|| ComplexError::UnknownGenerator(id.clone()))?;
            add_into(&mut out, i, c, &self.floor);
        }
        Ok(out)
    }

    fn to_chain(&self, v: &Sparse<C>) -> ChainVector<C> {
        ChainVector::from_pairs(v.iter().map(|(&i, c)| (self.ids[i].clone(), c.clone())))
    }

    fn boundary_sparse(&self, v: &Sparse<C>) -> Sparse<C> {
        let mut out = Sparse::new();
        for (&i, a) in v {
            for (&k, c) in &self.columns[i] {
                add_into(&mut out, k, &(a * c), &self.floor);
            }
        }
        out
    }

    pub fn floor(&self) -> &ExtRational {
        &self.floor
    }

    /// Number of nonzero reduced boundary columns, i.e. the rank of `δ`.
    pub fn boundary_rank(&self) -> usize {
        self.pivot_sources.len()
    }

    pub fn homology(&self) -> HomologyRanks {
        let key = |d: i64| match self.grading {
            Grading::Integer => d,
            Grading::Parity => d.rem_euclid(2),
        };
        let mut dims: BTreeMap<i64, i64> = BTreeMap::new();
        for &d in &self.degrees {
            *dims.entry(key(d)).or_default() += 1;
        }
        let mut out_rank: BTreeMap<i64, i64> = BTreeMap::new();
        for &s in &self.pivot_sources {
            *out_rank.entry(key(self.degrees[s])).or_default() += 1;
        }
        let incoming = |k: i64| -> i64 {
            let src = match self.grading {
                Grading::Integer => k + 1,
                Grading::Parity => 1 - k,
            };
            out_rank.get(&src).copied().unwrap_or(0)
        };
        let ranks = dims
            .iter()
            .map(|(&k, &n)| {
                let r = n - out_rank.get(&k).copied().unwrap_or(0) - incoming(k);
                (k, r.max(0) as usize)
            })
            .collect();
        HomologyRanks {
            grading: self.grading,
            ranks,
            near_threshold_pivots: self.near_threshold.iter().map(|&g| self.ids[g].clone()).collect(),
        }
    }

    pub fn level(&self, v: &ChainVector<C>) -> Result<ExtRational, ComplexError> {
        let s = self.to_sparse(v)?;
        Ok(self.lead(&s).map_or(ExtRational::NegInfinity, |(l, _)| l))
    }

    /// Least level over the homology class of the cycle `class`.
    pub fn spectral_number(&self, class: &ChainVector<C>) -> Result<Spectral<C>, ComplexError> {
        let v = self.to_sparse(class)?;
        let bd = self.boundary_sparse(&v);
        if let Some((level, _)) = self.lead(&bd) {
            return Err(ComplexError::NotClosed(level));
        }
        let reduced = self.reduce_vector(v);
        let Some((ExtRational::Finite(value), g)) = self.lead(&reduced) else {
            return Ok(Spectral::NegInfinity);
        };
        let exponent = reduced[&g].valuation().finite().cloned().expect("nonzero coefficient");
        let spectrality_witness = self.lattice.solve(&-exponent).map(|v| (self.ids[g].clone(), v));
        Ok(Spectral::Finite(SpectralResult {
            value,
            witness_cycle: self.to_chain(&reduced),
            spectrality_witness,
        }))
    }

    /// True when `v` is a boundary (up to the working floor).
    pub fn is_boundary(&self, v: &ChainVector<C>) -> Result<bool, ComplexError> {
        let s = self.to_sparse(v)?;
        Ok(self.reduce_vector(s).is_empty())
    }
}

fn add_into<C: Coefficient>(v: &mut Sparse<C>, k: usize, c: &NovikovScalar<C>, floor: &ExtRational) {
    let sum = match v.get(&k) {
        Some(prev) => prev + c,
        None => c.clone(),
    }
    .truncate(floor)
    .into_exact();
    if sum.is_zero() {
        v.remove(&k);
    } else {
        v.insert(k, sum);
    }
}
