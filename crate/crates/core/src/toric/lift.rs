//! Newton/Hensel lifting of leading-order critical points over the Novikov field.
//!
//! In log coordinates the critical equations are `F_j = Σ_i v_ij x^{v_i} q^{w_i} = 0`
//! with Jacobian `J_jk = Σ_i v_ij v_ik x^{v_i} q^{w_i}`. Row `j` of `J` is
//! `q^{w_j}` times the leading Jacobian plus lower terms, so after scaling rows
//! by `q^{−w_j}` the system is solvable whenever the leading Jacobian is
//! nonsingular. Each step updates `x_j ← x_j (1 − δ_j)`.

use num_traits::Zero;
use serde::Serialize;

use super::leading::smallest_singular_value;
use super::{PotentialFunction, ToricError};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::{ExtRational, Q};

pub const MAX_ITERATIONS: usize = 200;
const SINGULAR_TOL: f64 = 1e-8;

/// Truncated critical brane coordinates `x_j = e^{b_j}` with a residual bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct CriticalCertificate<C: Coefficient> {
    pub x: Vec<NovikovScalar<C>>,
    #[serde(with = "crate::rational::q_string")]
    pub order: Q,
    /// Every component of the logarithmic gradient at `x` has valuation ≤ this (−∞: exact zero).
    pub residual_valuation: ExtRational,
    /// Norm of the leading system at the leading coefficients of `x`.
    pub leading_residual: f64,
    pub iterations: usize,
}

fn solve<C: Coefficient>(
    mut a: Vec<Vec<NovikovScalar<C>>>,
    mut b: Vec<NovikovScalar<C>>,
    floor: &ExtRational,
) -> Result<Vec<NovikovScalar<C>>, ToricError> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].valuation().cmp(&a[s][col].valuation()).then(s.cmp(&r)))
            .ok_or(ToricError::SingularJacobian { smallest_singular_value: 0.0 })?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].invert_to(floor)?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul_to(&inv, floor);
            for c in col..n {
                let d = f.mul_to(&a[col][c], floor);
                a[r][c] = (&a[r][c] - &d).truncate(floor);
            }
            b[r] = (&b[r] - &f.mul_to(&b[col], floor)).truncate(floor);
        }
    }
    let mut x = vec![NovikovScalar::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = (&acc - &a[r][c].mul_to(&x[c], floor)).truncate(floor);
        }
        x[r] = acc.mul_to(&a[r][r].invert_to(floor)?, floor);
    }
    Ok(x)
}

/// Lifts the leading solution `x0` to a critical point truncated at `order`.
pub fn lift_critical<C: Coefficient>(
    w: &PotentialFunction,
    x0: &[C],
    order: &Q,
) -> Result<CriticalCertificate<C>, ToricError> {
    if x0.len() != w.dim {
        return Err(ToricError::DimensionMismatch { expected: w.dim, got: x0.len() });
    }
    let system = w.leading_system();
    let leading: Vec<_> = x0.iter().map(C::to_complex).collect();
    let sv = smallest_singular_value(&system.log_jacobian(w, &leading));
    if system.equations.iter().any(|e| e.weight.is_none()) || !(sv >= SINGULAR_TOL) {
        return Err(ToricError::SingularJacobian { smallest_singular_value: sv });
    }
    let row_weight: Vec<Q> = system.equations.iter().map(|e| e.weight.clone().expect("checked")).collect();
    let floor = ExtRational::Finite(order.clone());
    let mut x: Vec<NovikovScalar<C>> = x0.iter().map(|c| NovikovScalar::constant(c.clone())).collect();
    let mut previous = ExtRational::Finite(w.max_weight().cloned().unwrap_or_else(Q::zero) + Q::from_integer(1.into()));
    let power_cut = ExtRational::Finite(order - w.max_weight().cloned().unwrap_or_else(Q::zero));
    let mut stalls = 0;
    let mut iterations = 0;
    loop {
        let inverses = x
            .iter()
            .map(|xj| xj.invert_to(&power_cut))
            .collect::<Result<Vec<_>, _>>()?;
        let monomials: Vec<NovikovScalar<C>> = w
            .terms
            .iter()
            .map(|t| {
                let cut = ExtRational::Finite(order - &t.weight);
                let mut m = NovikovScalar::one();
                for (j, &k) in t.exponent.iter().enumerate() {
                    let base = if k < 0 { &inverses[j] } else { &x[j] };
                    for _ in 0..k.unsigned_abs() {
                        m = m.mul_to(base, &cut);
                    }
                }
                m.shift(&t.weight)
            })
            .collect();
        let coeff = |i: usize, j: usize| C::from_i64(w.terms[i].exponent[j]);
        let f: Vec<NovikovScalar<C>> = (0..w.dim)
            .map(|j| {
                let mut y = NovikovScalar::zero();
                for (i, m) in monomials.iter().enumerate() {
                    if w.terms[i].exponent[j] != 0 {
                        y = &y + &m.scale(&coeff(i, j));
                    }
                }
                y.truncate(&floor).into_exact()
            })
            .collect();
        let residual = f.iter().map(NovikovScalar::valuation).max().unwrap_or(ExtRational::NegInfinity);
        if residual == ExtRational::NegInfinity {
            break;
        }
        if residual >= previous {
            stalls += 1;
        }
        previous = residual.clone();
        if iterations >= MAX_ITERATIONS || stalls > 3 {
            return Err(ToricError::NoConvergence { iterations, residual_valuation: residual.to_string() });
        }
        iterations += 1;
        let a: Vec<Vec<NovikovScalar<C>>> = (0..w.dim)
            .map(|j| {
                (0..w.dim)
                    .map(|k| {
                        let mut s = NovikovScalar::zero();
                        for (i, m) in monomials.iter().enumerate() {
                            let v = w.terms[i].exponent[j] * w.terms[i].exponent[k];
                            if v != 0 {
                                s = &s + &m.scale(&C::from_i64(v));
                            }
                        }
                        s.shift(&-row_weight[j].clone()).truncate(&floor)
                    })
                    .collect()
            })
            .collect();
        let b: Vec<NovikovScalar<C>> =
            f.iter().zip(&row_weight).map(|(fj, wj)| fj.shift(&-wj.clone()).truncate(&floor)).collect();
        let delta = solve(a, b, &floor)?;
        for (xj, dj) in x.iter_mut().zip(&delta) {
            let factor = &NovikovScalar::one() - dj;
            *xj = xj.mul_to(&factor, &floor).into_exact();
        }
    }
    let residual_valuation = w
        .gradient_valuations(&x)?
        .into_iter()
        .max()
        .unwrap_or(ExtRational::NegInfinity);
    let lead: Vec<_> = x
        .iter()
        .map(|xj| xj.coeff_at(&Q::zero()).map_or(num_complex::Complex64::zero(), C::to_complex))
        .collect();
    Ok(CriticalCertificate {
        leading_residual: system.residual_norm(w, &lead),
        x,
        order: order.clone(),
        residual_valuation,
        iterations,
    })
}
