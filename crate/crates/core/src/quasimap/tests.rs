use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::novikov::{ComplexFloat, GaussianRational};
use crate::rational::{q, qi};
use crate::toric::{certify_heavy, MomentPolytope};
use crate::novikov::CoefficientMode;

type G = GaussianRational;

fn g(n: i64) -> G {
    G::new(qi(n), qi(0))
}

fn floor() -> ExtRational {
    ExtRational::Finite(qi(-10))
}

fn cp1_w(l: Q) -> PotentialFunction {
    PotentialFunction::of_fiber(&MomentPolytope::interval(qi(0), qi(1)), &[l]).unwrap()
}

fn exact(xs: &[i64]) -> Vec<NovikovScalar<G>> {
    xs.iter().map(|&x| NovikovScalar::constant(g(x))).collect()
}

fn complex_y(ys: Vec<NovikovScalar<G>>) -> QuasimapComplex<G> {
    QuasimapComplex { dim: ys.len(), y: ys, floor: floor() }
}

#[test]
fn subset_ids() {
    assert_eq!(subset_id(&[]), "e{}");
    assert_eq!(subset_id(&[0]), "e{1}");
    assert_eq!(subset_id(&[0, 2]), "e{1,3}");
}

#[test]
fn critical_cp1_brane() {
    let c = build_cqf(&cp1_w(q(1, 2)), &exact(&[1]), &floor()).unwrap();
    assert!(c.is_critical());
    assert!(c.to_filtered().differential.is_empty());
    let r = c.hqf_rank().unwrap();
    assert_eq!(r.rank, 2);
    assert_eq!(r.by_parity, BTreeMap::from([(0, 1), (1, 1)]));
    assert!(r.unit_nonzero);
    assert_eq!(r.gradient_valuations, vec![ExtRational::NegInfinity]);
}

#[test]
fn noncritical_cp1_brane() {
    // y = 2q^{-1/2} - (1/2)q^{-1/2}
    let c = build_cqf(&cp1_w(q(1, 2)), &exact(&[2]), &floor()).unwrap();
    let y = NovikovScalar::monomial(G::new(q(3, 2), qi(0)), q(-1, 2)).with_floor(floor());
    assert_eq!(c.y, vec![y.clone()]);
    let m = c.m1(&ChainVector::basis("e{1}")).unwrap();
    assert_eq!(m, ChainVector::from_pairs([("e{}".to_string(), y)]));
    let r = c.hqf_rank().unwrap();
    assert_eq!(r.rank, 0);
    assert!(!r.unit_nonzero);
    assert_eq!(r.gradient_valuations, vec![ExtRational::Finite(q(-1, 2))]);
}

#[test]
fn cp2_barycenter_roots_of_unity() {
    let w = PotentialFunction::of_fiber(&MomentPolytope::simplex(2), &[q(1, 3), q(1, 3)]).unwrap();
    for k in 0..3 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
        let x = vec![NovikovScalar::constant(ComplexFloat::new(z)); 2];
        let r = build_cqf(&w, &x, &floor()).unwrap().hqf_rank().unwrap();
        assert_eq!(r.rank, 4, "root {k}");
        assert_eq!(r.by_degree, BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        let x2: Vec<_> = x.iter().map(|s| s.scale(&ComplexFloat::new(Complex64::new(2.0, 0.0)))).collect();
        assert_eq!(build_cqf(&w, &x2, &floor()).unwrap().hqf_rank().unwrap().rank, 0);
    }
}

#[test]
fn central_charge_of_cp1() {
    let w = cp1_w(q(1, 2));
    let two = NovikovScalar::monomial(g(2), q(-1, 2)).with_floor(floor());
    assert_eq!(central_charge(&w, &exact(&[1]), &floor()).unwrap(), two);
    assert_eq!(central_charge(&w, &exact(&[-1]), &floor()).unwrap(), two.neg_ref());
    // off-center the larger weight leads
    let w = cp1_w(q(1, 4));
    let cc = central_charge(&w, &exact(&[1]), &floor()).unwrap();
    assert_eq!(cc.valuation(), ExtRational::Finite(q(-1, 4)));
    assert_eq!(cc.valuation(), ExtRational::Finite(w.max_weight().unwrap().clone()));
}

#[test]
fn non_unit_brane_is_rejected() {
    let x = vec![NovikovScalar::monomial(g(1), qi(-1))];
    assert!(matches!(
        build_cqf(&cp1_w(q(1, 2)), &x, &floor()),
        Err(QuasimapError::Toric(ToricError::NotUnit { coordinate: 0 }))
    ));
    assert!(central_charge(&cp1_w(q(1, 2)), &x, &floor()).is_err());
}

#[test]
fn certified_branes_have_full_rank() {
    let p = MomentPolytope::interval(qi(0), qi(1)).product(&MomentPolytope::interval(qi(0), qi(1)));
    let cert = certify_heavy(&p, &[q(1, 2), q(1, 2)], &qi(-6), CoefficientMode::Gaussian).unwrap();
    let cert = cert.certificate().expect("central fiber certifies");
    let w = cert.potential().unwrap();
    let f = ExtRational::Finite(cert.order.clone());
    assert_eq!(cert.branes.len(), 4);
    for b in &cert.branes {
        assert_eq!(brane_rank(&w, b, 1, &f).unwrap().rank, 4);
        let r = brane_rank(&w, b, 2, &f).unwrap();
        assert_eq!(r.rank, 0);
        assert!(!r.unit_nonzero);
    }
}

#[test]
fn export_round_trips_through_json() {
    let y = vec![
        NovikovScalar::monomial(g(3), q(-1, 2)),
        NovikovScalar::new([(g(1), q(-1, 3)), (G::i(), qi(-2))], ExtRational::NegInfinity),
    ];
    let c = complex_y(y).to_filtered();
    assert!(c.validate().is_valid());
    let back = FilteredComplex::<G>::from_json(&c.to_json()).unwrap();
    assert_eq!(back.homology_rank().unwrap().total(), 0);
    assert_eq!(back.generators.len(), 4);
}

fn scalar() -> impl Strategy<Value = NovikovScalar<G>> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 1i64..=12), 0..3).prop_map(|ts| {
        NovikovScalar::new(ts.into_iter().map(|(a, b, e)| (G::new(qi(a), qi(b)), q(-e, 4))), ExtRational::NegInfinity)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn koszul_square_and_rank(ys in prop::collection::vec(scalar(), 1..=3)) {
        let c = complex_y(ys.clone());
        let f = c.to_filtered();
        prop_assert!(f.validate().is_valid());
        for s in c.basis() {
            let once = c.m1(&ChainVector::basis(subset_id(&s))).unwrap();
            prop_assert!(c.m1(&once).unwrap().is_zero());
        }
        prop_assert!(c.m1(&c.unit_class()).unwrap().is_zero());
        let r = c.hqf_rank().unwrap();
        let expected = if ys.iter().all(NovikovScalar::is_zero) { 1 << ys.len() } else { 0 };
        prop_assert_eq!(r.rank, expected);
        prop_assert_eq!(r.unit_nonzero, expected > 0);
    }

    #[test]
    fn differential_lowers_level(ys in prop::collection::vec(scalar(), 1..=3)) {
        let c = complex_y(ys);
        let f = c.to_filtered();
        for s in c.basis() {
            let v = ChainVector::basis(subset_id(&s));
            let out = c.m1(&v).unwrap();
            if !out.is_zero() {
                prop_assert!(f.level(&out).unwrap() < f.level(&v).unwrap());
            }
        }
    }
}
