use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{QuasistateError, Real};

/// Values of a functional on named functions (or group elements).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionalTable {
    pub values: BTreeMap<String, Real>,
}

pub type GroupTable = FunctionalTable;

impl FunctionalTable {
    pub fn new(values: impl IntoIterator<Item = (String, Real)>) -> Self {
        Self { values: values.into_iter().collect() }
    }

    fn get(&self, name: &str) -> Result<&Real, QuasistateError> {
        self.values.get(name).ok_or_else(|| QuasistateError::UnknownFunction(name.to_string()))
    }

    fn get_in(&self, table: &str, name: &str) -> Result<&Real, QuasistateError> {
        self.values
            .get(name)
            .ok_or_else(|| QuasistateError::IncompleteTable { table: table.to_string(), function: name.to_string() })
    }
}

/// Pointwise facts about functions, one per axiom they exercise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `‖f − g‖_{C⁰} = distance`.
    Lipschitz { f: String, g: String, distance: Real },
    /// `g = factor · f` with `factor ≥ 0`.
    Multiple { f: String, g: String, factor: Real },
    /// `f ≤ g` pointwise.
    Leq { f: String, g: String },
    /// `f ≡ 1`.
    Unit { f: String },
    /// `{f, g} = 0`, `supp g` displaceable, `sum = f + g`.
    DisplaceableSum { f: String, g: String, sum: String },
    /// `g = f ∘ φ` for a Hamiltonian diffeomorphism `φ`.
    Conjugate { f: String, g: String },
    /// `g = f + constant`.
    Shift { f: String, g: String, constant: Real },
    /// `supp f` displaceable.
    Displaceable { f: String },
    /// `{f, g} = 0` and `sum = f + g`.
    CommutingSum { f: String, g: String, sum: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Passed,
    Failed,
    NotChecked,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomOutcome {
    pub axiom: &'static str,
    pub status: AxiomStatus,
    /// Rests on declared geometric data (displaceability, Calabi values).
    pub conditional: bool,
    pub checked: usize,
    /// One line per failing relation, naming the witnesses.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiStateReport {
    pub axioms: Vec<AxiomOutcome>,
    pub passed: bool,
}

impl QuasiStateReport {
    pub fn axiom(&self, name: &str) -> Option<&AxiomOutcome> {
        self.axioms.iter().find(|a| a.axiom == name)
    }
}

struct Tally {
    axioms: Vec<AxiomOutcome>,
}

impl Tally {
    fn new(names: &[(&'static str, bool)]) -> Self {
        Self {
            axioms: names
                .iter()
                .map(|&(axiom, conditional)| AxiomOutcome {
                    axiom,
                    status: AxiomStatus::NotChecked,
                    conditional,
                    checked: 0,
                    failures: Vec::new(),
                })
                .collect(),
        }
    }

    fn record(&mut self, axiom: &str, ok: bool, detail: impl FnOnce() -> String) {
        let a = self.axioms.iter_mut().find(|a| a.axiom == axiom).expect("known axiom");
        a.checked += 1;
        if ok {
            if a.status == AxiomStatus::NotChecked {
                a.status = AxiomStatus::Passed;
            }
        } else {
            a.status = AxiomStatus::Failed;
            a.failures.push(detail());
        }
    }

    fn finish(self) -> QuasiStateReport {
        let passed = self.axioms.iter().all(|a| a.status != AxiomStatus::Failed);
        QuasiStateReport { axioms: self.axioms, passed }
    }
}

fn nonnegative(name: &str, x: &Real) -> Result<(), QuasistateError> {
    if x.is_negative() {
        return Err(QuasistateError::Malformed(format!("{name} must be nonnegative, got {x}")));
    }
    Ok(())
}

/// Checks the partial quasi-state axioms on the declared relations.
/// Comparisons are exact between exact values and within `tol` otherwise.
pub fn check_partial_quasistate(
    zeta: &FunctionalTable,
    relations: &[Relation],
    tol: f64,
) -> Result<QuasiStateReport, QuasistateError> {
    let mut t = Tally::new(&[
        ("lipschitz_continuity", false),
        ("semi_homogeneity", false),
        ("monotonicity", false),
        ("normalization", false),
        ("partial_additivity", true),
        ("hamiltonian_invariance", true),
        ("additivity_with_constants", false),
        ("vanishing", true),
        ("triangle_inequality", false),
    ]);
    for r in relations {
        match r {
            Relation::Lipschitz { f, g, distance } => {
                nonnegative("distance", distance)?;
                let (a, b) = (zeta.get(f)?, zeta.get(g)?);
                let ok = a.sub(b).abs().le_tol(distance, tol);
                t.record("lipschitz_continuity", ok, || format!("|ζ({f}) − ζ({g})| = |{a} − {b}| > {distance}"));
            }
            Relation::Multiple { f, g, factor } => {
                nonnegative("factor", factor)?;
                let (a, b) = (zeta.get(f)?, zeta.get(g)?);
                let ok = b.eq_tol(&factor.mul(a), tol);
                t.record("semi_homogeneity", ok, || format!("ζ({g}) = {b} ≠ {factor}·ζ({f}) = {}", factor.mul(a)));
            }
            Relation::Leq { f, g } => {
                let (a, b) = (zeta.get(f)?, zeta.get(g)?);
                t.record("monotonicity", a.le_tol(b, tol), || format!("{f} ≤ {g} but ζ({f}) = {a} > ζ({g}) = {b}"));
            }
            Relation::Unit { f } => {
                let a = zeta.get(f)?;
                let one = Real::Exact(crate::rational::qi(1));
                t.record("normalization", a.eq_tol(&one, tol), || format!("ζ({f}) = {a} ≠ 1"));
            }
            Relation::DisplaceableSum { f, g, sum } => {
                let (a, _, s) = (zeta.get(f)?, zeta.get(g)?, zeta.get(sum)?);
                t.record("partial_additivity", s.eq_tol(a, tol), || format!("ζ({sum}) = {s} ≠ ζ({f}) = {a}"));
            }
            Relation::Conjugate { f, g } => {
                let (a, b) = (zeta.get(f)?, zeta.get(g)?);
                t.record("hamiltonian_invariance", a.eq_tol(b, tol), || format!("ζ({f}) = {a} ≠ ζ({g}) = {b}"));
            }
            Relation::Shift { f, g, constant } => {
                let (a, b) = (zeta.get(f)?, zeta.get(g)?);
                let expected = a.add(constant);
                t.record("additivity_with_constants", b.eq_tol(&expected, tol), || {
                    format!("ζ({g}) = {b} ≠ ζ({f}) + {constant} = {expected}")
                });
            }
            Relation::Displaceable { f } => {
                let a = zeta.get(f)?;
                t.record("vanishing", a.eq_tol(&Real::zero(), tol), || format!("ζ({f}) = {a} ≠ 0"));
            }
            Relation::CommutingSum { f, g, sum } => {
                let (a, b, s) = (zeta.get(f)?, zeta.get(g)?, zeta.get(sum)?);
                let rhs = a.add(b);
                t.record("triangle_inequality", rhs.le_tol(s, tol), || {
                    format!("ζ({sum}) = {s} < ζ({f}) + ζ({g}) = {rhs}")
                });
            }
        }
    }
    Ok(t.finish())
}

/// Declared facts about elements of the universal cover of the Hamiltonian group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupRelation {
    /// Hofer distance between `f` and `g` with the Lipschitz constant to test.
    Lipschitz { f: String, g: String, hofer_distance: Real, constant: Real },
    /// `g = fⁿ`.
    Power { f: String, g: String, n: u32 },
    /// `product = g·f`, with the constant `K` of a displaceable set and the
    /// fragmentation norms of both factors.
    Product { f: String, g: String, product: String, constant: Real, norm_f: Real, norm_g: Real },
    /// `g = ψ f ψ⁻¹`.
    Conjugate { f: String, g: String },
    /// `f` supported in a displaceable set with the given Calabi value.
    Calabi { f: String, calabi: Real },
}

pub fn check_prequasimorphism(
    mu: &GroupTable,
    relations: &[GroupRelation],
    tol: f64,
) -> Result<QuasiStateReport, QuasistateError> {
    let mut t = Tally::new(&[
        ("lipschitz_continuity", true),
        ("semi_homogeneity", false),
        ("controlled_quasi_additivity", false),
        ("hamiltonian_invariance", false),
        ("calabi_property", true),
    ]);
    for r in relations {
        match r {
            GroupRelation::Lipschitz { f, g, hofer_distance, constant } => {
                nonnegative("hofer_distance", hofer_distance)?;
                nonnegative("constant", constant)?;
                let (a, b) = (mu.get(f)?, mu.get(g)?);
                let bound = constant.mul(hofer_distance);
                t.record("lipschitz_continuity", a.sub(b).abs().le_tol(&bound, tol), || {
                    format!("|μ({f}) − μ({g})| = |{a} − {b}| > {bound}")
                });
            }
            GroupRelation::Power { f, g, n } => {
                if *n == 0 {
                    return Err(QuasistateError::Malformed("power must be at least 1".into()));
                }
                let (a, b) = (mu.get(f)?, mu.get(g)?);
                let expected = Real::Exact(crate::rational::qi(*n as i64)).mul(a);
                t.record("semi_homogeneity", b.eq_tol(&expected, tol), || {
                    format!("μ({g}) = {b} ≠ {n}·μ({f}) = {expected}")
                });
            }
            GroupRelation::Product { f, g, product, constant, norm_f, norm_g } => {
                for (name, x) in [("constant", constant), ("norm_f", norm_f), ("norm_g", norm_g)] {
                    nonnegative(name, x)?;
                }
                let (a, b, p) = (mu.get(f)?, mu.get(g)?, mu.get(product)?);
                let defect = p.sub(a).sub(b).abs();
                let small = if norm_f.le_tol(norm_g, 0.0) { norm_f } else { norm_g };
                let bound = constant.mul(small);
                t.record("controlled_quasi_additivity", defect.le_tol(&bound, tol), || {
                    format!("|μ({product}) − μ({f}) − μ({g})| = {defect} > {bound}")
                });
            }
            GroupRelation::Conjugate { f, g } => {
                let (a, b) = (mu.get(f)?, mu.get(g)?);
                t.record("hamiltonian_invariance", a.eq_tol(b, tol), || format!("μ({f}) = {a} ≠ μ({g}) = {b}"));
            }
            GroupRelation::Calabi { f, calabi } => {
                let a = mu.get(f)?;
                t.record("calabi_property", a.eq_tol(calabi, tol), || format!("μ({f}) = {a} ≠ Cal = {calabi}"));
            }
        }
    }
    Ok(t.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavinessViolation {
    pub function: String,
    pub zeta: Real,
    pub sup: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavinessReport {
    pub subset: String,
    pub checked: Vec<String>,
    pub violations: Vec<HeavinessViolation>,
}

impl HeavinessReport {
    pub fn is_heavy(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tests `ζ(H) ≤ sup_Y H` for every function with a declared supremum over `Y`.
pub fn heaviness_check(
    zeta: &FunctionalTable,
    subset: &str,
    sups: &BTreeMap<String, Real>,
    tol: f64,
) -> Result<HeavinessReport, QuasistateError> {
    let mut violations = Vec::new();
    for (h, sup) in sups {
        let z = zeta.get_in("zeta", h)?;
        if !z.le_tol(sup, tol) {
            violations.push(HeavinessViolation { function: h.clone(), zeta: z.clone(), sup: sup.clone() });
        }
    }
    Ok(HeavinessReport { subset: subset.to_string(), checked: sups.keys().cloned().collect(), violations })
}

/// A split function `joint(p₀, p₁) = f0(p₀) + f1(p₁)` on a product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPair {
    pub f0: String,
    pub f1: String,
    pub joint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub pair: SplitPair,
    pub expected: Real,
    pub actual: Real,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    pub pairs: Vec<PairCheck>,
    pub passed: bool,
}

/// Additivity `ζ(f0 ⊕ f1) = ζ⁰(f0) + ζ¹(f1)` on split functions.
pub fn product_quasistate_check(
    zeta0: &FunctionalTable,
    zeta1: &FunctionalTable,
    zeta: &FunctionalTable,
    pairs: &[SplitPair],
    tol: f64,
) -> Result<ProductReport, QuasistateError> {
    let mut out = Vec::with_capacity(pairs.len());
    for p in pairs {
        let expected = zeta0.get_in("zeta0", &p.f0)?.add(zeta1.get_in("zeta1", &p.f1)?);
        let actual = zeta.get_in("zeta", &p.joint)?.clone();
        out.push(PairCheck { pair: p.clone(), passed: actual.eq_tol(&expected, tol), expected, actual });
    }
    let passed = out.iter().all(|c| c.passed);
    Ok(ProductReport { pairs: out, passed })
}

/// Heaviness of a product read off from its factors: heavy factors give a
/// heavy product. Nothing is inferred when a factor has a violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductHeaviness {
    pub subset: String,
    pub factors_heavy: [bool; 2],
    pub heavy: Option<bool>,
    pub basis: &'static str,
}

pub fn infer_product_heaviness(h0: &HeavinessReport, h1: &HeavinessReport) -> ProductHeaviness {
    let factors_heavy = [h0.is_heavy(), h1.is_heavy()];
    ProductHeaviness {
        subset: format!("{} × {}", h0.subset, h1.subset),
        factors_heavy,
        heavy: (factors_heavy[0] && factors_heavy[1]).then_some(true),
        basis: "product of heavy factors",
    }
}
