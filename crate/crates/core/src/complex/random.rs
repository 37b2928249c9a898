//! Seeded random valid complexes with known structure.
//!
//! A complex is built as `δ = P N P⁻¹`, where `N` pairs generators `b → a`
//! with coefficient `c·q^w` (`w + A(a) < A(b)`, `w` a period) and `P = 1 + E`
//! with `E` sending each generator to same-degree generators of strictly
//! smaller action. `P` preserves levels, so the pairing of `N` is the
//! filtered normal form of `δ` and the unpaired generators carry homology.

use std::collections::BTreeMap;

use rand::Rng;

use super::{ChainVector, DifferentialEntry, FilteredComplex, OrbitGenerator, PeriodLattice};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{q, ExtRational, Q};

#[derive(Debug, Clone)]
pub struct RandomParams {
    pub max_generators: usize,
    pub max_lattice_rank: usize,
    pub max_degree: i64,
    pub floor: i64,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self { max_generators: 8, max_lattice_rank: 2, max_degree: 2, floor: -40 }
    }
}

/// A random complex together with the normal-form data it was built from.
#[derive(Debug, Clone)]
pub struct RandomComplex<C> {
    pub complex: FilteredComplex<C>,
    /// `(b, a)` with `N⟨b⟩ = c·q^w⟨a⟩`.
    pub pairs: Vec<(String, String)>,
    pub unpaired: Vec<String>,
    /// The change of basis `P`, as images of basis vectors.
    pub basis_change: BTreeMap<String, ChainVector<C>>,
}

const PERIODS: [(i64, i64); 6] = [(1, 1), (1, 2), (3, 2), (2, 1), (1, 3), (2, 3)];

fn random_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    q(rng.random_range(-num..=num), rng.random_range(1..=den))
}

fn random_unit<C: Coefficient, R: Rng>(rng: &mut R) -> C {
    loop {
        let x = random_q(rng, 3, 2);
        if x != q(0, 1) {
            return C::from_q(&x);
        }
    }
}

fn random_period<R: Rng>(rng: &mut R, lattice: &PeriodLattice) -> Q {
    let v: Vec<i64> = (0..lattice.rank()).map(|_| rng.random_range(-3..=3)).collect();
    lattice.period(&v)
}

/// A nonzero scalar with one to three terms at exponents in `(1/4)Z ∩ [−3/2, 3/2]`.
pub fn random_shift<C: Coefficient, R: Rng>(rng: &mut R) -> NovikovScalar<C> {
    loop {
        let n = rng.random_range(1..=3);
        let terms: Vec<(C, Q)> =
            (0..n).map(|_| (random_unit::<C, _>(rng), q(rng.random_range(-6..=6), 4))).collect();
        let s = NovikovScalar::new(terms, ExtRational::NegInfinity);
        if !s.is_zero() {
            return s;
        }
    }
}

fn apply<C: Coefficient>(map: &BTreeMap<String, ChainVector<C>>, v: &ChainVector<C>) -> ChainVector<C> {
    let mut out = ChainVector::zero();
    for (id, a) in v.iter() {
        if let Some(img) = map.get(id) {
            out = out.add(&img.scale(a));
        }
    }
    out
}

pub fn random_complex<C: Coefficient, R: Rng>(rng: &mut R, params: &RandomParams) -> RandomComplex<C> {
    let n = rng.random_range(1..=params.max_generators.max(1));
    let rank = rng.random_range(0..=params.max_lattice_rank);
    let lattice = PeriodLattice::new(
        (0..rank)
            .map(|_| {
                let (a, b) = PERIODS[rng.random_range(0..PERIODS.len())];
                q(a, b)
            })
            .collect(),
    );
    let generators: Vec<OrbitGenerator> = (0..n)
        .map(|i| OrbitGenerator::new(format!("g{i}"), random_q(rng, 12, 4), rng.random_range(0..=params.max_degree)))
        .collect();

    // Normal form N.
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    let mut normal: BTreeMap<String, ChainVector<C>> = BTreeMap::new();
    for b in 0..n {
        if used[b] || !rng.random_bool(0.6) {
            continue;
        }
        let candidates: Vec<usize> = (0..n)
            .filter(|&a| !used[a] && a != b && generators[a].degree + 1 == generators[b].degree)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let a = candidates[rng.random_range(0..candidates.len())];
        let gap = &generators[b].action - &generators[a].action;
        let Some(w) = (0..8).map(|_| random_period(rng, &lattice)).find(|w| w < &gap) else {
            continue;
        };
        used[a] = true;
        used[b] = true;
        let coeff = NovikovScalar::monomial(random_unit::<C, _>(rng), w);
        normal.insert(generators[b].id.clone(), ChainVector::from_pairs([(generators[a].id.clone(), coeff)]));
        pairs.push((generators[b].id.clone(), generators[a].id.clone()));
    }
    let unpaired = (0..n).filter(|&i| !used[i]).map(|i| generators[i].id.clone()).collect();

    // E, nilpotent because it strictly lowers action within a degree.
    let mut e_map: BTreeMap<String, ChainVector<C>> = BTreeMap::new();
    for u in &generators {
        let mut img = ChainVector::zero();
        for t in &generators {
            if t.degree == u.degree && t.action < u.action && rng.random_bool(0.35) {
                let w = match lattice.rank() {
                    0 => q(0, 1),
                    r => -lattice.periods[rng.random_range(0..r)].clone() * q(rng.random_range(0..=1), 1),
                };
                img.add_term(&t.id, &NovikovScalar::monomial(random_unit::<C, _>(rng), w));
            }
        }
        e_map.insert(u.id.clone(), img);
    }
    let p_map: BTreeMap<String, ChainVector<C>> = generators
        .iter()
        .map(|g| (g.id.clone(), ChainVector::basis(g.id.clone()).add(&e_map[&g.id])))
        .collect();
    // P⁻¹ = Σ (−E)^k.
    let p_inv: BTreeMap<String, ChainVector<C>> = generators
        .iter()
        .map(|g| {
            let minus_one = NovikovScalar::constant(-C::one());
            let mut term = ChainVector::basis(g.id.clone());
            let mut acc = term.clone();
            for _ in 0..n {
                term = apply(&e_map, &term).scale(&minus_one);
                if term.is_zero() {
                    break;
                }
                acc = acc.add(&term);
            }
            (g.id.clone(), acc)
        })
        .collect();

    let mut differential = Vec::new();
    for g in &generators {
        let image = apply(&p_map, &apply(&normal, &p_inv[&g.id]));
        for (to, c) in image.iter() {
            differential.push(DifferentialEntry { from: g.id.clone(), to: to.clone(), coeff: c.clone() });
        }
    }
    let complex = FilteredComplex::new(
        lattice,
        generators,
        differential,
        ExtRational::Finite(q(params.floor, 1)),
    );
    RandomComplex { complex, pairs, unpaired, basis_change: p_map }
}

impl<C: Coefficient> RandomComplex<C> {
    /// `P(z)` for a chain `z` written in the normal-form basis.
    pub fn from_normal_basis(&self, z: &ChainVector<C>) -> ChainVector<C> {
        apply(&self.basis_change, z)
    }

    /// A random cycle: `P(Σ λ_u e_u + Σ μ_a e_a)` over unpaired `u` and pair targets `a`,
/// with monomial coefficients whose exponents are periods.
    /// Returns the cycle and its normal-form expression.
    pub fn random_cycle<R: Rng>(&self, rng: &mut R) -> (ChainVector<C>, ChainVector<C>) {
        let mut z = ChainVector::zero();
        let targets = self.pairs.iter().map(|(_, a)| a);
        for id in self.unpaired.iter().chain(targets) {
            if rng.random_bool(0.6) {
                let w = random_period(rng, &self.complex.lattice);
                z.add_term(id, &NovikovScalar::monomial(random_unit::<C, _>(rng), w));
            }
        }
        (self.from_normal_basis(&z), z)
    }

    /// The spectral number of the class of `P(z)`, read off the normal form:
    /// the largest `v_q(z_u) + A(u)` over unpaired `u`.
    pub fn normal_form_value(&self, z: &ChainVector<C>) -> ExtRational {
        self.unpaired
            .iter()
            .filter_map(|u| {
                let a = &self.complex.generator(u)?.action;
                z.get(u).map(|c| &c.valuation() + a)
            })
            .max()
            .unwrap_or(ExtRational::NegInfinity)
    }

    /// A random cycle whose unpaired part is nonzero, when homology is nonzero.
    pub fn random_nonzero_cycle<R: Rng>(&self, rng: &mut R) -> Option<(ChainVector<C>, ChainVector<C>)> {
        if self.unpaired.is_empty() {
            return None;
        }
        loop {
            let (c, z) = self.random_cycle(rng);
            if self.unpaired.iter().any(|u| z.get(u).is_some()) {
                return Some((c, z));
            }
        }
    }
}
