use serde::Serialize;

use super::{tensor_product, ChainVector, ComplexError, FilteredComplex, Spectral};
use crate::novikov::{Coefficient, NovikovScalar};
use crate::rational::ExtRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, axiom: &str, passed: bool, detail: String) {
        self.checks.push(AxiomCheck { axiom: axiom.into(), passed, detail });
    }
}

/// Spectrality of a spectral-number outcome: the witness is a closed
/// representative of `class` whose level is the value, and the value lies in
/// the action spectrum.
fn spectrality<C: Coefficient>(
    c: &FilteredComplex<C>,
    class: &ChainVector<C>,
    s: &Spectral<C>,
) -> Result<(bool, String), ComplexError> {
    let Spectral::Finite(r) = s else {
        let exact = c.reduced()?.is_boundary(class)?;
        return Ok((exact, "class is zero (−∞)".into()));
    };
    let red = c.reduced()?;
    let level = red.level(&r.witness_cycle)?;
    let closed = red.level(&c.boundary(&r.witness_cycle)?)?;
    let diff = r.witness_cycle.add(&class.scale(&NovikovScalar::constant(-C::one())));
    let homologous = red.is_boundary(&diff)?;
    let in_spectrum = c.spectrum().contains(&r.value);
    let witness_ok = match &r.spectrality_witness {
        Some((id, v)) => c
            .generator(id)
            .is_some_and(|g| &g.action - c.lattice.period(v) == r.value),
        None => false,
    };
    let ok = level == ExtRational::Finite(r.value.clone())
        && closed == ExtRational::NegInfinity
        && homologous
        && in_spectrum
        && witness_ok;
    Ok((
        ok,
        format!(
            "value {} level {level} closed {} homologous {homologous} in spectrum {in_spectrum} witness {witness_ok}",
            r.value,
            closed == ExtRational::NegInfinity
        ),
    ))
}

/// Spectrality of `c(class)`, as a single check.
pub fn check_spectrality<C: Coefficient>(
    c: &FilteredComplex<C>,
    class: &ChainVector<C>,
) -> Result<AxiomCheck, ComplexError> {
    let s = c.spectral_number(class)?;
    let (passed, detail) = spectrality(c, class, &s)?;
    Ok(AxiomCheck { axiom: "spectrality".into(), passed, detail })
}

/// The shift property `c(λa) = c(a) + v_q(λ)`.
pub fn check_shift<C: Coefficient>(
    c: &FilteredComplex<C>,
    class: &ChainVector<C>,
    lambda: &NovikovScalar<C>,
) -> Result<AxiomCheck, ComplexError> {
    let base = c.spectral_number(class)?.value();
    let shifted = c.spectral_number(&class.scale(lambda))?.value();
    let expected = match lambda.valuation() {
        ExtRational::Finite(w) => &base + &w,
        ExtRational::NegInfinity => ExtRational::NegInfinity,
    };
    Ok(AxiomCheck {
        axiom: "shift".into(),
        passed: shifted == expected,
        detail: format!("c(λa) = {shifted}, c(a) + v_q(λ) = {expected}"),
    })
}

/// Checks spectrality for both classes, the shift property `c(λa) = c(a) + v_q(λ)`
/// for each supplied `λ`, and additivity `c(a⁰⊗a¹) = c(a⁰) + c(a¹)` on the tensor product.
pub fn verify_spectral_axioms<C: Coefficient>(
    c0: &FilteredComplex<C>,
    a0: &ChainVector<C>,
    c1: &FilteredComplex<C>,
    a1: &ChainVector<C>,
    shifts: &[NovikovScalar<C>],
) -> Result<AxiomReport, ComplexError> {
    let mut report = AxiomReport::default();
    let s0 = c0.spectral_number(a0)?;
    let s1 = c1.spectral_number(a1)?;
    for (name, c, a, s) in [("spectrality[0]", c0, a0, &s0), ("spectrality[1]", c1, a1, &s1)] {
        let (ok, detail) = spectrality(c, a, s)?;
        report.push(name, ok, detail);
    }
    for (k, lambda) in shifts.iter().enumerate() {
        let check = check_shift(c0, a0, lambda)?;
        report.push(&format!("shift[{k}]"), check.passed, check.detail);
    }
    let t = tensor_product(c0, c1)?;
    let st = t.spectral_number(&a0.tensor(a1))?.value();
    let sum = &s0.value() + &s1.value();
    report.push("additivity", st == sum, format!("c(a⁰⊗a¹) = {st}, c(a⁰) + c(a¹) = {sum}"));
    Ok(report)
}
