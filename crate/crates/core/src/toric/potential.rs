use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{MomentPolytope, ToricError};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{ExtRational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialTerm {
    pub exponent: Vec<i64>,
    /// Novikov exponent `−l_i(λ)` (rational part).
    #[serde(with = "crate::rational::q_string")]
    pub weight: Q,
}

/// `W(x) = Σ_i x^{v_i} q^{w_i}` on `(Λ*)ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialFunction {
    pub dim: usize,
    pub terms: Vec<PotentialTerm>,
}

/// Per coordinate `j`, the terms of `x_j ∂W/∂x_j` of largest weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingEquation {
    #[serde(serialize_with = "ser_opt_q")]
    pub weight: Option<Q>,
    pub terms: Vec<usize>,
}

fn ser_opt_q<S: serde::Serializer>(w: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match w {
        Some(w) => s.serialize_str(&crate::rational::format_q(w)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingSystem {
    /// Terms of maximal weight overall (the dominant facets).
    pub stratum: Vec<usize>,
    pub equations: Vec<LeadingEquation>,
}

pub(super) fn complex_monomial(x: &[Complex64], v: &[i64]) -> Complex64 {
    x.iter().zip(v).fold(Complex64::new(1.0, 0.0), |acc, (xj, &k)| acc * xj.powi(k as i32))
}

impl PotentialFunction {
    pub fn new(dim: usize, terms: Vec<(Vec<i64>, Q)>) -> Self {
        Self { dim, terms: terms.into_iter().map(|(exponent, weight)| PotentialTerm { exponent, weight }).collect() }
    }

    /// `W_λ = Σ x^{v_i} q^{−l_i(λ)}`, one term per facet.
    pub fn of_fiber(p: &MomentPolytope, lambda: &[Q]) -> Result<Self, ToricError> {
        let values = p.facet_values(lambda)?;
        Ok(Self::new(p.dim, p.facets.iter().zip(values).map(|(f, l)| (f.normal.clone(), -l)).collect()))
    }

    pub fn max_weight(&self) -> Option<&Q> {
        self.terms.iter().map(|t| &t.weight).max()
    }

    pub fn leading_system(&self) -> LeadingSystem {
        let stratum = match self.max_weight() {
            Some(m) => (0..self.terms.len()).filter(|&i| &self.terms[i].weight == m).collect(),
            None => vec![],
        };
        let equations = (0..self.dim)
            .map(|j| {
                let involved: Vec<usize> = (0..self.terms.len()).filter(|&i| self.terms[i].exponent[j] != 0).collect();
                let weight = involved.iter().map(|&i| self.terms[i].weight.clone()).max();
                let terms = involved.into_iter().filter(|&i| Some(&self.terms[i].weight) == weight.as_ref()).collect();
                LeadingEquation { weight, terms }
            })
            .collect();
        LeadingSystem { stratum, equations }
    }

    /// `x^v` truncated at `floor`; negative powers use truncated inverses.
    pub(super) fn monomial<C: Coefficient>(
        x: &[NovikovScalar<C>],
        v: &[i64],
        floor: &ExtRational,
    ) -> Result<NovikovScalar<C>, ToricError> {
        let mut acc = NovikovScalar::one();
        for (xj, &k) in x.iter().zip(v) {
            if k != 0 {
                acc = acc.mul_to(&xj.powi(k, floor)?, floor);
            }
        }
        Ok(acc)
    }

    fn check_units<C: Coefficient>(&self, x: &[NovikovScalar<C>]) -> Result<(), ToricError> {
        if x.len() != self.dim {
            return Err(ToricError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if let Some(j) = x.iter().position(|xj| xj.valuation() != ExtRational::Finite(Q::zero())) {
            return Err(ToricError::NotUnit { coordinate: j });
        }
        Ok(())
    }

    /// `W(x)` truncated at `floor`.
    pub fn evaluate<C: Coefficient>(
        &self,
        x: &[NovikovScalar<C>],
        floor: &ExtRational,
    ) -> Result<NovikovScalar<C>, ToricError> {
        self.check_units(x)?;
        let mut w = NovikovScalar::zero();
        for t in &self.terms {
            w = &w + &Self::monomial(x, &t.exponent, floor)?.shift(&t.weight);
        }
        Ok(w.truncate(floor))
    }

    /// Logarithmic gradient `y_j = x_j ∂W/∂x_j = Σ_i v_ij x^{v_i} q^{w_i}`, truncated at `floor`.
    pub fn log_gradient<C: Coefficient>(
        &self,
        x: &[NovikovScalar<C>],
        floor: &ExtRational,
    ) -> Result<Vec<NovikovScalar<C>>, ToricError> {
        self.check_units(x)?;
        let monomials = self
            .terms
            .iter()
            .map(|t| Ok(Self::monomial(x, &t.exponent, floor)?.shift(&t.weight)))
            .collect::<Result<Vec<_>, ToricError>>()?;
        Ok((0..self.dim)
            .map(|j| {
                let mut y = NovikovScalar::zero();
                for (t, m) in self.terms.iter().zip(&monomials) {
                    if t.exponent[j] != 0 {
                        y = &y + &m.scale(&C::from_i64(t.exponent[j]));
                    }
                }
                y.truncate(floor)
            })
            .collect())
    }

    /// Exact valuations of the logarithmic gradient at exact `x`.
    ///
    /// Each component is multiplied by the unit `x^M`, with `M` clearing all
    /// negative exponents, so only polynomial arithmetic is needed and no
    /// truncation happens. The valuation is unchanged by the unit factor.
    pub fn gradient_valuations<C: Coefficient>(&self, x: &[NovikovScalar<C>]) -> Result<Vec<ExtRational>, ToricError> {
        self.check_units(x)?;
        let shift: Vec<i64> = (0..self.dim)
            .map(|k| self.terms.iter().map(|t| t.exponent[k]).min().unwrap_or(0).min(0))
            .collect();
        let exact = ExtRational::NegInfinity;
        let cleared = self
            .terms
            .iter()
            .map(|t| {
                let e: Vec<i64> = t.exponent.iter().zip(&shift).map(|(a, s)| a - s).collect();
                Ok(Self::monomial(x, &e, &exact)?.shift(&t.weight))
            })
            .collect::<Result<Vec<_>, ToricError>>()?;
        Ok((0..self.dim)
            .map(|j| {
                let mut y = NovikovScalar::zero();
                for (t, m) in self.terms.iter().zip(&cleared) {
                    if t.exponent[j] != 0 {
                        y = &y + &m.scale(&C::from_i64(t.exponent[j]));
                    }
                }
                y.valuation()
            })
            .collect())
    }
}

impl LeadingSystem {
    /// `F_j(x) = Σ_{i ∈ I_j} v_ij x^{v_i}` at complex `x`.
    pub fn eval(&self, w: &PotentialFunction, x: &[Complex64]) -> Vec<Complex64> {
        self.equations
            .iter()
            .enumerate()
            .map(|(j, eq)| {
                eq.terms.iter().fold(Complex64::zero(), |acc, &i| {
                    let t = &w.terms[i];
                    acc + complex_monomial(x, &t.exponent) * t.exponent[j] as f64
                })
            })
            .collect()
    }

    /// `J_jk = Σ_{i ∈ I_j} v_ij v_ik x^{v_i}`, the Jacobian in log coordinates.
    pub fn log_jacobian(&self, w: &PotentialFunction, x: &[Complex64]) -> nalgebra::DMatrix<Complex64> {
        let n = self.equations.len();
        nalgebra::DMatrix::from_fn(n, n, |j, k| {
            self.equations[j].terms.iter().fold(Complex64::zero(), |acc, &i| {
                let t = &w.terms[i];
                acc + complex_monomial(x, &t.exponent) * (t.exponent[j] * t.exponent[k]) as f64
            })
        })
    }

    pub fn residual_norm(&self, w: &PotentialFunction, x: &[Complex64]) -> f64 {
        self.eval(w, x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}
