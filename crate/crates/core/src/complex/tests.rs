use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_complex, RandomComplex, RandomParams};
use super::*;
use crate::novikov::NovikovScalar;
use crate::rational::{q, qi};

type S = NovikovScalar<Q>;

fn mono(c: i64, e: Q) -> S {
    S::monomial(qi(c), e)
}

fn entry(from: &str, to: &str, coeff: S) -> DifferentialEntry<Q> {
    DifferentialEntry { from: from.into(), to: to.into(), coeff }
}

fn chain(pairs: &[(&str, S)]) -> ChainVector<Q> {
    ChainVector::from_pairs(pairs.iter().map(|(id, c)| (id.to_string(), c.clone())))
}

fn hand_case() -> FilteredComplex<Q> {
    FilteredComplex::new(
        PeriodLattice::new(vec![q(1, 2)]),
        vec![
            OrbitGenerator::new("a1", qi(3), 0),
            OrbitGenerator::new("a2", qi(1), 0),
            OrbitGenerator::new("b", qi(2), 1),
        ],
        vec![entry("b", "a1", mono(1, qi(-2))), entry("b", "a2", mono(-1, q(-1, 2)))],
        ExtRational::NegInfinity,
    )
}

#[test]
fn zero_differential_is_valid() {
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", q(3, 10), 0), OrbitGenerator::new("y", qi(1), 1)],
        vec![],
        ExtRational::NegInfinity,
    );
    assert!(c.validate().is_valid());
    assert_eq!(c.homology_rank().unwrap().total(), 2);
    let s = c.spectral_number(&ChainVector::basis("x")).unwrap();
    assert_eq!(s.value(), ExtRational::Finite(q(3, 10)));
}

#[test]
fn action_drop_violation_is_reported() {
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", qi(0), 1), OrbitGenerator::new("y", q(1, 2), 0)],
        vec![entry("x", "y", mono(1, qi(0)))],
        ExtRational::NegInfinity,
    );
    let report = c.validate();
    assert!(matches!(report.violations[..], [Violation::ActionDrop { .. }]));
    assert!(matches!(c.homology_rank(), Err(ComplexError::Invalid(_))));
}

#[test]
fn small_valid_complex() {
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", qi(0), 1), OrbitGenerator::new("y", q(1, 2), 0)],
        vec![entry("x", "y", mono(1, qi(-1)))],
        ExtRational::NegInfinity,
    );
    assert!(c.validate().is_valid());
    assert_eq!(c.homology_rank().unwrap().total(), 0);
}

#[test]
fn other_violations_are_reported() {
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![
            OrbitGenerator::new("x", qi(5), 2),
            OrbitGenerator::new("y", qi(3), 1),
            OrbitGenerator::new("z", qi(1), 0),
            OrbitGenerator::new("z", qi(1), 0),
        ],
        vec![entry("x", "y", mono(1, qi(-1))), entry("y", "z", mono(1, qi(-1))), entry("x", "x", mono(1, qi(-1)))],
        ExtRational::NegInfinity,
    );
    let v = c.validate().violations;
    assert!(v.iter().any(|x| matches!(x, Violation::DuplicateId { .. })));
    assert!(v.iter().any(|x| matches!(x, Violation::NonzeroSquare { .. })));
    assert!(v.iter().any(|x| matches!(x, Violation::DegreeDrop { .. })));
    let unknown = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", qi(5), 1)],
        vec![entry("x", "w", mono(1, qi(-9)))],
        ExtRational::NegInfinity,
    );
    assert!(matches!(unknown.validate().violations[..], [Violation::UnknownGenerator { .. }]));
}

#[test]
fn level_examples() {
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", q(3, 10), 0), OrbitGenerator::new("y", qi(4), 0)],
        vec![],
        ExtRational::NegInfinity,
    );
    assert_eq!(c.level(&ChainVector::basis("x")).unwrap(), ExtRational::Finite(q(3, 10)));
    assert_eq!(c.level(&chain(&[("x", mono(1, qi(2)))])).unwrap(), ExtRational::Finite(q(23, 10)));
    let c0 = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", qi(0), 0), OrbitGenerator::new("y", qi(4), 0)],
        vec![],
        ExtRational::NegInfinity,
    );
    let v = chain(&[("x", mono(1, qi(2))), ("y", mono(1, qi(-1)))]);
    assert_eq!(c0.level(&v).unwrap(), ExtRational::Finite(qi(3)));
    assert_eq!(c0.level(&ChainVector::zero()).unwrap(), ExtRational::NegInfinity);
    assert!(matches!(c0.level(&ChainVector::basis("nope")), Err(ComplexError::UnknownGenerator(_))));
}

#[test]
fn acyclic_pair_and_koszul_square() {
    let pair = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", qi(1), 1), OrbitGenerator::new("y", qi(0), 0)],
        vec![entry("x", "y", mono(1, qi(0)))],
        ExtRational::NegInfinity,
    );
    assert_eq!(pair.homology_rank().unwrap().total(), 0);

    // Koszul complex on e{}, e1, e2, e12 with y1 = q^-1 a unit and y2 = q^-2 + q^-3.
    let y1 = mono(1, qi(-1));
    let y2 = &mono(1, qi(-2)) + &mono(1, qi(-3));
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        ["e{}", "e1", "e2", "e12"]
            .iter()
            .zip([0, 1, 1, 2])
            .map(|(id, d)| OrbitGenerator::new(*id, qi(0), d))
            .collect(),
        vec![
            entry("e1", "e{}", y1.clone()),
            entry("e2", "e{}", y2.clone()),
            entry("e12", "e2", y1.clone()),
            entry("e12", "e1", y2.neg_ref()),
        ],
        ExtRational::NegInfinity,
    );
    assert!(c.validate().is_valid());
    let h = c.homology_rank().unwrap();
    assert_eq!(h.total(), 0);
    assert_eq!(c.spectral_number(&ChainVector::basis("e{}")).unwrap(), Spectral::NegInfinity);
}

#[test]
fn hand_case_spectral_number() {
    let c = hand_case();
    assert!(c.validate().is_valid());
    let s = c.spectral_number(&ChainVector::basis("a1")).unwrap();
    let r = s.finite().unwrap();
    assert_eq!(r.value, q(5, 2));
    assert_eq!(r.witness_cycle, chain(&[("a2", mono(1, q(3, 2)))]));
    let (id, v) = r.spectrality_witness.clone().unwrap();
    assert_eq!(id, "a2");
    assert_eq!(qi(1) - c.lattice.period(&v), q(5, 2));
    assert!(c.spectrum().contains(&r.value));
}

#[test]
fn shift_by_non_monomial() {
    let c = hand_case();
    let a = ChainVector::basis("a1");
    let lambda = S::monomial(qi(2), q(1, 3));
    let base = c.spectral_number(&a).unwrap().value();
    let shifted = c.spectral_number(&a.scale(&lambda)).unwrap().value();
    assert_eq!(shifted, &base + &q(1, 3));
    let lambda2 = &lambda + &mono(5, qi(-4));
    let shifted2 = c.spectral_number(&a.scale(&lambda2)).unwrap().value();
    assert_eq!(shifted2, &base + &q(1, 3));
}

#[test]
fn non_cycle_is_rejected() {
    let c = hand_case();
    assert!(matches!(c.spectral_number(&ChainVector::basis("b")), Err(ComplexError::NotClosed(_))));
}

#[test]
fn spectrum_description() {
    let c = FilteredComplex::<Q>::new(
        PeriodLattice::new(vec![qi(1)]),
        vec![OrbitGenerator::new("x", q(3, 10), 0)],
        vec![],
        ExtRational::NegInfinity,
    );
    let sp = c.spectrum();
    assert!(sp.contains(&q(13, 10)));
    assert!(sp.contains(&q(-7, 10)));
    assert!(!sp.contains(&q(1, 2)));
    assert_eq!(sp.residues(), vec![q(3, 10)]);
    let finite = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("x", q(3, 10), 0), OrbitGenerator::new("y", qi(2), 0)],
        vec![],
        ExtRational::NegInfinity,
    );
    let sp = finite.spectrum();
    assert!(sp.contains(&qi(2)) && sp.contains(&q(3, 10)));
    assert!(!sp.contains(&q(13, 10)));
}

#[test]
fn tensor_with_unit_complex() {
    let c = hand_case();
    let unit = FilteredComplex::<Q>::new(
        PeriodLattice::trivial(),
        vec![OrbitGenerator::new("u", qi(0), 0)],
        vec![],
        ExtRational::NegInfinity,
    );
    let t = tensor_product(&c, &unit).unwrap();
    assert!(t.validate().is_valid());
    for g in &c.generators {
        assert_eq!(t.generator(&format!("{}⊗u", g.id)).unwrap().action, g.action);
    }
    let a = ChainVector::basis("a1").tensor(&ChainVector::basis("u"));
    assert_eq!(t.spectral_number(&a).unwrap().value(), ExtRational::Finite(q(5, 2)));
}

#[test]
fn delta_zero_additivity_is_action_additivity() {
    let mk = |a: Q| {
        FilteredComplex::<Q>::new(
            PeriodLattice::trivial(),
            vec![OrbitGenerator::new("x", a, 0)],
            vec![],
            ExtRational::NegInfinity,
        )
    };
    let (c0, c1) = (mk(q(1, 3)), mk(q(-5, 2)));
    let x = ChainVector::basis("x");
    let r = verify_spectral_axioms(&c0, &x, &c1, &x, &[mono(2, q(1, 3))]).unwrap();
    assert!(r.all_passed(), "{r:?}");
}

#[test]
fn json_round_trip() {
    let c = hand_case();
    let v = c.to_json();
    assert_eq!(v["version"], 1);
    assert_eq!(v["lattice"]["periods"][0], "1/2");
    let back = FilteredComplex::<Q>::from_json(&v).unwrap();
    assert_eq!(back, c);
    let mut wrong = v.clone();
    wrong["version"] = 7.into();
    assert!(FilteredComplex::<Q>::from_json(&wrong).is_err());
    let ch = chain(&[("a2", mono(1, q(3, 2)))]);
    assert_eq!(ChainVector::<Q>::from_json(&ch.to_json()).unwrap(), ch);
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The least level of a class `P(z)` is `max_u (v_q(λ_u) + A(u))` over unpaired `u`.
fn oracle_value(rc: &RandomComplex<Q>, z: &ChainVector<Q>) -> ExtRational {
    rc.unpaired
        .iter()
        .filter_map(|u| z.get(u).map(|c| &c.valuation() + &rc.complex.generator(u).unwrap().action))
        .fold(ExtRational::NegInfinity, ExtRational::max)
}

fn oracle_ranks(rc: &RandomComplex<Q>, grading: Grading) -> BTreeMap<i64, usize> {
    let mut out: BTreeMap<i64, usize> = rc
        .complex
        .generators
        .iter()
        .map(|g| (if grading == Grading::Integer { g.degree } else { g.degree.rem_euclid(2) }, 0))
        .collect();
    for u in &rc.unpaired {
        let d = rc.complex.generator(u).unwrap().degree;
        *out.entry(if grading == Grading::Integer { d } else { d.rem_euclid(2) }).or_default() += 1;
    }
    out
}

use super::reduce::Grading;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_complexes_are_valid_and_match_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rc = random_complex::<Q, _>(&mut r, &RandomParams::default());
        prop_assert!(rc.complex.validate().is_valid());
        let h = rc.complex.homology_rank().unwrap();
        prop_assert_eq!(&h.ranks, &oracle_ranks(&rc, h.grading));
        for _ in 0..3 {
            let (cycle, z) = rc.random_cycle(&mut r);
            let s = rc.complex.spectral_number(&cycle).unwrap();
            prop_assert_eq!(s.value(), oracle_value(&rc, &z));
            if let Spectral::Finite(res) = &s {
                prop_assert!(rc.complex.spectrum().contains(&res.value));
            }
        }
    }

    #[test]
    fn spectral_number_ignores_id_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rc = random_complex::<Q, _>(&mut r, &RandomParams::default());
        let (cycle, _) = rc.random_cycle(&mut r);
        let n = rc.complex.generators.len();
        // Reverse the id order: g_i becomes h_{n-1-i}.
        let rename = |id: &str| format!("h{}", n - 1 - id[1..].parse::<usize>().unwrap());
        let mut renamed = rc.complex.clone();
        for g in &mut renamed.generators { g.id = rename(&g.id); }
        for e in &mut renamed.differential { e.from = rename(&e.from); e.to = rename(&e.to); }
        renamed.generators.reverse();
        let cycle2 = ChainVector::from_pairs(cycle.iter().map(|(id, c)| (rename(id), c.clone())));
        prop_assert_eq!(
            rc.complex.spectral_number(&cycle).unwrap().value(),
            renamed.spectral_number(&cycle2).unwrap().value()
        );
    }

    #[test]
    fn boundary_lowers_level(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rc = random_complex::<Q, _>(&mut r, &RandomParams::default());
        let v = ChainVector::from_pairs(rc.complex.generators.iter().map(|g| {
            (g.id.clone(), mono(1 + (seed % 3) as i64, q((seed % 5) as i64 - 2, 2)))
        }));
        let dv = rc.complex.boundary(&v).unwrap();
        if !dv.is_zero() {
            prop_assert!(rc.complex.level(&dv).unwrap() < rc.complex.level(&v).unwrap());
        }
    }

    #[test]
    fn kunneth_and_additivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let params = RandomParams { max_generators: 4, ..RandomParams::default() };
        let r0 = random_complex::<Q, _>(&mut r, &params);
        let r1 = random_complex::<Q, _>(&mut r, &params);
        let t = tensor_product(&r0.complex, &r1.complex).unwrap();
        prop_assert!(t.validate().is_valid());
        let (h0, h1, ht) = (
            r0.complex.homology_rank().unwrap(),
            r1.complex.homology_rank().unwrap(),
            t.homology_rank().unwrap(),
        );
        if h0.grading == Grading::Integer && h1.grading == Grading::Integer {
            let conv = kunneth_convolution(&h0.ranks, &h1.ranks);
            let nonzero: BTreeMap<i64, usize> = ht.ranks.iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect();
            prop_assert_eq!(nonzero, conv);
        }
        prop_assert_eq!(ht.total(), h0.total() * h1.total());
        let (a0, _) = r0.random_cycle(&mut r);
        let (a1, _) = r1.random_cycle(&mut r);
        let report = verify_spectral_axioms(&r0.complex, &a0, &r1.complex, &a1, &[mono(2, q(1, 3))]).unwrap();
        prop_assert!(report.all_passed(), "{:?}", report);
    }

    #[test]
    fn json_round_trip_random(seed in any::<u64>()) {
        let rc = random_complex::<Q, _>(&mut rng(seed), &RandomParams::default());
        let back = FilteredComplex::<Q>::from_json(&rc.complex.to_json()).unwrap();
        prop_assert_eq!(back, rc.complex);
    }
}
