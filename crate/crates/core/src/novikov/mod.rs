//! Truncated arithmetic in the universal downward Novikov field.
//!
//! An element is a finite sum `Σ aᵢ q^{wᵢ}` with rational exponents and a
//! truncation floor. The valuation is the leading (largest) exponent.

mod coeff;
mod scalar;

pub use coeff::{Coefficient, CoefficientMode, ComplexFloat, GaussianRational, DEFAULT_EPS};
pub use scalar::{NovikovScalar, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NovikovError {
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("infinite series needs a finite truncation floor")]
    InfiniteInverse,
    #[error("exp diverges: valuation {0} is positive")]
    ExpDiverges(String),
    #[error("exp of the constant term is not representable in this coefficient field")]
    ExpNotRepresentable,
}

pub type RationalScalar = NovikovScalar<num_rational::BigRational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi, ExtRational, Q};
    use num_complex::Complex64;
    use proptest::prelude::*;

    type R = RationalScalar;

    fn mono(c: i64, e: Q) -> R {
        R::monomial(qi(c), e)
    }

    fn fin(x: Q) -> ExtRational {
        ExtRational::Finite(x)
    }

    #[test]
    fn cancellation_and_identity() {
        let x = &mono(2, qi(1)) + &mono(1, qi(0));
        let y = mono(-2, qi(1));
        assert_eq!(&x + &y, R::one());
        assert_eq!(&R::zero() + &x, x);
    }

    #[test]
    fn sub_floor_terms_are_dropped() {
        let x = mono(1, qi(-5));
        let zero_with_floor = R::zero().with_floor(fin(qi(-3)));
        let s = &x + &zero_with_floor;
        assert!(s.is_zero());
        assert_eq!(s.floor(), &fin(qi(-3)));
    }

    #[test]
    fn monomial_and_binomial_products() {
        let a = R::q_pow(q(1, 2));
        let b = R::q_pow(q(-7, 3));
        assert_eq!(&a * &b, R::q_pow(q(1, 2) + q(-7, 3)));
        let x = &R::one() + &R::q_pow(qi(-1));
        let expected = R::new([(qi(1), qi(0)), (qi(2), qi(-1)), (qi(1), qi(-2))], ExtRational::NegInfinity);
        assert_eq!(&x * &x, expected);
    }

    #[test]
    fn valuation_reads_leading_exponent() {
        let x = &mono(3, qi(2)) + &mono(5, qi(-1));
        assert_eq!(x.valuation(), fin(qi(2)));
        assert_eq!(R::zero().valuation(), ExtRational::NegInfinity);
    }

    #[test]
    fn monomial_inverse() {
        let x = R::q_pow(q(5, 2));
        assert_eq!(x.invert().unwrap(), R::q_pow(q(-5, 2)));
        assert_eq!(R::zero().invert(), Err(NovikovError::ZeroInverse));
    }

    #[test]
    fn geometric_inverse_at_floor() {
        let x = (&R::one() - &R::q_pow(qi(-1))).with_floor(fin(qi(-3)));
        let inv = x.invert().unwrap();
        let expected = R::new((0..=3).map(|k| (qi(1), qi(-k))), fin(qi(-3)));
        assert_eq!(inv, expected);
        // multiplying back leaves only sub-floor residue
        let prod = &x * &inv;
        assert_eq!(prod.terms(), R::one().terms());
        // the exact product (no truncation) differs from 1 by -q^{-4} only
        let exact = &(&R::one() - &R::q_pow(qi(-1))) * &inv.clone().into_exact();
        assert_eq!(&exact - &R::one(), R::monomial(qi(-1), qi(-4)));
    }

    #[test]
    fn inverse_of_exact_polynomial_needs_floor() {
        let x = &R::one() + &R::q_pow(qi(-1));
        assert_eq!(x.invert(), Err(NovikovError::InfiniteInverse));
        assert!(x.invert_to(&fin(qi(-4))).is_ok());
    }

    #[test]
    fn exp_of_zero_and_divergent_input() {
        assert_eq!(R::zero().exp().unwrap(), R::one());
        assert!(matches!(R::q_pow(qi(1)).exp(), Err(NovikovError::ExpDiverges(_))));
        assert_eq!(R::constant(qi(1)).exp(), Err(NovikovError::ExpNotRepresentable));
    }

    #[test]
    fn exp_times_exp_of_negative_is_one() {
        let floor = fin(qi(-6));
        let b = (&R::monomial(q(1, 2), qi(-1)) + &R::monomial(qi(-3), q(-3, 2))).with_floor(floor.clone());
        let e = b.exp().unwrap();
        let e_neg = b.neg_ref().exp().unwrap();
        assert!(e.is_unit());
        assert_eq!((&e * &e_neg).terms(), R::one().terms());
    }

    #[test]
    fn floating_exp_of_constant() {
        let b = NovikovScalar::constant(ComplexFloat::new(Complex64::new(0.0, std::f64::consts::PI)));
        let e = b.exp().unwrap();
        let c = e.leading_term().unwrap().coeff.z;
        assert!((c - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let x = (&mono(3, q(1, 2)) + &mono(-1, qi(-4))).with_floor(fin(qi(-10)));
        let v = x.to_json();
        assert_eq!(v["terms"][0]["c"], "3");
        assert_eq!(v["terms"][0]["exp"], "1/2");
        assert_eq!(v["floor"], "-10");
        assert_eq!(R::from_json(&v).unwrap(), x);
    }

    fn arb_scalar() -> impl Strategy<Value = R> {
        proptest::collection::vec((-5i64..=5, -6i64..=6, 1i64..=3), 0..5).prop_map(|ts| {
            R::new(ts.into_iter().map(|(c, n, d)| (qi(c), q(n, d))), ExtRational::NegInfinity)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn valuation_laws(a in arb_scalar(), b in arb_scalar()) {
            let (va, vb) = (a.valuation(), b.valuation());
            let vs = (&a + &b).valuation();
            prop_assert!(vs <= va.clone().max(vb.clone()));
            if va != vb {
                prop_assert_eq!(vs, va.clone().max(vb.clone()));
            }
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).valuation(), &va + &vb);
            }
        }

        #[test]
        fn normalization_is_idempotent(a in arb_scalar()) {
            let again = R::new(a.terms().iter().map(|t| (t.coeff.clone(), t.exp.clone())), a.floor().clone());
            prop_assert_eq!(again, a);
        }

        #[test]
        fn inverse_valuation_negates(a in arb_scalar(), floor in -12i64..-4) {
            prop_assume!(!a.is_zero());
            let a = a.with_floor(fin(qi(floor)));
            prop_assume!(!a.is_zero());
            let inv = a.invert().unwrap();
            let va = a.valuation().finite().cloned().unwrap();
            prop_assert_eq!(inv.valuation(), fin(-va.clone()));
            // a · a⁻¹ = 1 above the propagated floor
            let prod = &a * &inv;
            let one = R::one().truncate(prod.floor());
            prop_assert_eq!(prod.terms(), one.terms());
        }
    }

}
