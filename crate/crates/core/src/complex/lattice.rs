use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{gcd_q, Q};

/// The period homomorphism `ω: Γ ≅ Zʳ → Q`, given on the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PeriodLattice {
    #[serde(with = "crate::rational::q_vec_string")]
    pub periods: Vec<Q>,
}

impl PeriodLattice {
    pub fn new(periods: Vec<Q>) -> Self {
        Self { periods }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.periods.len()
    }

    pub fn period(&self, v: &[i64]) -> Q {
        self.periods
            .iter()
            .zip(v)
            .fold(Q::zero(), |acc, (p, &k)| acc + p * Q::from_integer(k.into()))
    }

    /// Positive generator of the period group `ω(Γ) ⊂ Q`; zero when trivial.
    pub fn step(&self) -> Q {
        gcd_q(&self.periods)
    }

    /// Direct sum `Γ₀ ⊕ Γ₁`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.periods.iter().chain(&other.periods).cloned().collect())
    }

    /// An integer vector `v` with `ω(v) = target`, if one exists.
    pub fn solve(&self, target: &Q) -> Option<Vec<i64>> {
        if target.is_zero() {
            return Some(vec![0; self.rank()]);
        }
        let denom = self
            .periods
            .iter()
            .fold(target.denom().clone(), |l, p| l.lcm(p.denom()));
        let scaled: Vec<BigInt> = self
            .periods
            .iter()
            .map(|p| p.numer() * (&denom / p.denom()))
            .collect();
        let rhs = target.numer() * (&denom / target.denom());
        // running extended gcd: g = Σ coeffs[i] · scaled[i]
        let mut g = BigInt::zero();
        let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); scaled.len()];
        for (i, a) in scaled.iter().enumerate() {
            let e = g.extended_gcd(a);
            for c in coeffs.iter_mut().take(i) {
                *c *= &e.x;
            }
            coeffs[i] = e.y;
            g = e.gcd;
        }
        if g.is_zero() || !(&rhs % &g).is_zero() {
            return None;
        }
        let k = &rhs / &g;
        coeffs.iter().map(|c| (c * &k).to_i64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn solves_period_equations() {
        let l = PeriodLattice::new(vec![q(1, 2), q(1, 3)]);
        assert_eq!(l.step(), q(1, 6));
        for t in [q(1, 6), q(-5, 6), qi(7), q(3, 2)] {
            let v = l.solve(&t).unwrap();
            assert_eq!(l.period(&v), t);
        }
        assert!(l.solve(&q(1, 12)).is_none());
    }

    #[test]
    fn trivial_lattice_only_hits_zero() {
        let l = PeriodLattice::trivial();
        assert_eq!(l.solve(&qi(0)), Some(vec![]));
        assert_eq!(l.solve(&qi(1)), None);
        assert_eq!(l.step(), qi(0));
    }
}
