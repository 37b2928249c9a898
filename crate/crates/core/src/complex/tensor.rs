use std::collections::BTreeMap;

use super::{ComplexError, DifferentialEntry, FilteredComplex, OrbitGenerator};
use crate::novikov::Coefficient;

pub(super) fn pair_id(x: &str, y: &str) -> String {
    format!("{x}⊗{y}")
}

/// Tensor product over the Novikov field.
///
/// Generators are pairs with summed actions and degrees, the lattice is the
/// direct sum, and `δ(x⊗y) = δx⊗y + (−1)^{deg x} x⊗δy`.
pub fn tensor_product<C: Coefficient>(
    c0: &FilteredComplex<C>,
    c1: &FilteredComplex<C>,
) -> Result<FilteredComplex<C>, ComplexError> {
    for c in [c0, c1] {
        let report = c.validate();
        if !report.is_valid() {
            return Err(ComplexError::Invalid(report));
        }
    }
    let mut generators = Vec::with_capacity(c0.generators.len() * c1.generators.len());
    for x in &c0.generators {
        for y in &c1.generators {
            generators.push(OrbitGenerator::new(pair_id(&x.id, &y.id), &x.action + &y.action, x.degree + y.degree));
        }
    }
    let mut differential = Vec::new();
    for e in &c0.differential {
        for y in &c1.generators {
            differential.push(DifferentialEntry {
                from: pair_id(&e.from, &y.id),
                to: pair_id(&e.to, &y.id),
                coeff: e.coeff.clone(),
            });
        }
    }
    for x in &c0.generators {
        let odd = x.degree.rem_euclid(2) == 1;
        for e in &c1.differential {
            differential.push(DifferentialEntry {
                from: pair_id(&x.id, &e.from),
                to: pair_id(&x.id, &e.to),
                coeff: if odd { e.coeff.neg_ref() } else { e.coeff.clone() },
            });
        }
    }
    Ok(FilteredComplex::new(
        c0.lattice.direct_sum(&c1.lattice),
        generators,
        differential,
        c0.floor.clone().max(c1.floor.clone()),
    ))
}

/// Graded convolution `(r0 * r1)(k) = Σ_{i+j=k} r0(i)·r1(j)`.
pub fn kunneth_convolution(r0: &BTreeMap<i64, usize>, r1: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for (&i, &a) in r0 {
        for (&j, &b) in r1 {
            if a * b > 0 {
                *out.entry(i + j).or_default() += a * b;
            }
        }
    }
    out
}
