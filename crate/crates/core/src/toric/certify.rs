use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::leading::{critical_points_leading, LeadingStatus};
use super::lift::{lift_critical, CriticalCertificate};
use super::{MomentPolytope, PotentialFunction, ToricError};
use crate::novikov::{Coefficient, CoefficientMode, ComplexFloat, GaussianRational, NovikovScalar};
use crate::rational::{format_q, q, value_to_q, ExtRational, Q};
use crate::SCHEMA_VERSION;

/// Criterion a certificate invokes: a critical point of the potential at the
/// fiber makes the fiber heavy.
pub const CERTIFICATE_TAG: &str = "critical-point-heaviness";

const SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Brane {
    Exact(CriticalCertificate<GaussianRational>),
    Numeric(CriticalCertificate<ComplexFloat>),
}

impl Brane {
    pub fn mode(&self) -> CoefficientMode {
        match self {
            Brane::Exact(_) => CoefficientMode::Gaussian,
            Brane::Numeric(_) => CoefficientMode::Complex,
        }
    }

    pub fn residual_valuation(&self) -> &ExtRational {
        match self {
            Brane::Exact(c) => &c.residual_valuation,
            Brane::Numeric(c) => &c.residual_valuation,
        }
    }

    pub fn leading_residual(&self) -> f64 {
        match self {
            Brane::Exact(c) => c.leading_residual,
            Brane::Numeric(c) => c.leading_residual,
        }
    }

    /// Constant terms of the coordinates.
    pub fn leading(&self) -> Vec<Complex64> {
        fn lead<C: Coefficient>(x: &[NovikovScalar<C>]) -> Vec<Complex64> {
            x.iter().map(|s| s.coeff_at(&Q::from_integer(0.into())).map_or(Complex64::new(0.0, 0.0), C::to_complex)).collect()
        }
        match self {
            Brane::Exact(c) => lead(&c.x),
            Brane::Numeric(c) => lead(&c.x),
        }
    }

    /// The coordinates converted to floating coefficients.
    pub fn as_numeric(&self) -> Vec<NovikovScalar<ComplexFloat>> {
        match self {
            Brane::Numeric(c) => c.x.clone(),
            Brane::Exact(c) => c
                .x
                .iter()
                .map(|s| {
                    NovikovScalar::new(
                        s.terms().iter().map(|t| (ComplexFloat::new(t.coeff.to_complex()), t.exp.clone())),
                        s.floor().clone(),
                    )
                })
                .collect(),
        }
    }

    /// Exact residual valuations of the logarithmic gradient at the brane.
    pub fn gradient_valuations(&self, w: &PotentialFunction) -> Result<Vec<ExtRational>, ToricError> {
        match self {
            Brane::Exact(c) => w.gradient_valuations(&c.x),
            Brane::Numeric(c) => w.gradient_valuations(&c.x),
        }
    }

    pub fn to_json(&self) -> Value {
        let (x, order, res, lead, it) = match self {
            Brane::Exact(c) => (c.x.iter().map(|s| s.to_json()).collect::<Vec<_>>(), &c.order, &c.residual_valuation, c.leading_residual, c.iterations),
            Brane::Numeric(c) => (c.x.iter().map(|s| s.to_json()).collect::<Vec<_>>(), &c.order, &c.residual_valuation, c.leading_residual, c.iterations),
        };
        json!({
            "mode": self.mode(),
            "x": x,
            "order": format_q(order),
            "residual_valuation": res,
            "leading_residual": lead,
            "iterations": it,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ToricError> {
        let bad = |s: String| ToricError::Malformed(s);
        let order = value_to_q(v.get("order").ok_or_else(|| bad("brane without order".into()))?).map_err(bad)?;
        let residual_valuation: ExtRational = serde_json::from_value(v.get("residual_valuation").cloned().unwrap_or(Value::Null))
            .map_err(|e| bad(e.to_string()))?;
        let leading_residual = v.get("leading_residual").and_then(Value::as_f64).unwrap_or(0.0);
        let iterations = v.get("iterations").and_then(Value::as_u64).unwrap_or(0) as usize;
        let xs = v.get("x").and_then(Value::as_array).ok_or_else(|| bad("brane without x".into()))?;
        fn parse<C: Coefficient>(xs: &[Value]) -> Result<Vec<NovikovScalar<C>>, ToricError> {
            xs.iter().map(|s| NovikovScalar::from_json(s).map_err(ToricError::Malformed)).collect()
        }
        let mode: CoefficientMode = serde_json::from_value(v.get("mode").cloned().unwrap_or(Value::Null))
            .map_err(|e| bad(e.to_string()))?;
        Ok(match mode {
            CoefficientMode::Complex => Brane::Numeric(CriticalCertificate { x: parse(xs)?, order, residual_valuation, leading_residual, iterations }),
            CoefficientMode::Gaussian | CoefficientMode::Rational => {
                Brane::Exact(CriticalCertificate { x: parse(xs)?, order, residual_valuation, leading_residual, iterations })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeavinessCertificate {
    pub polytope: MomentPolytope,
    pub fiber: Vec<Q>,
    pub order: Q,
    pub leading_stratum: Vec<usize>,
    pub branes: Vec<Brane>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoneFound {
    pub fiber: Vec<String>,
    /// Facets of maximal weight.
    pub leading_stratum: Vec<usize>,
    pub leading: LeadingStatus,
    pub degenerate_roots: usize,
    pub failed_lifts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertifyOutcome {
    Certified(HeavinessCertificate),
    /// No critical brane was found. This is not evidence against heaviness.
    NoneFound(NoneFound),
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&HeavinessCertificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::NoneFound(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CertifyOutcome::Certified(c) => c.to_json(),
            CertifyOutcome::NoneFound(n) => {
                let mut v = serde_json::to_value(n).expect("serializable");
                v["version"] = json!(SCHEMA_VERSION);
                v["outcome"] = json!("none_found");
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BraneCheck {
    pub recomputed_residual: ExtRational,
    pub declared_residual: ExtRational,
    pub units: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub polytope_valid: bool,
    pub branes: Vec<BraneCheck>,
    pub distinct: bool,
    pub passed: bool,
}

impl HeavinessCertificate {
    pub fn potential(&self) -> Result<PotentialFunction, ToricError> {
        PotentialFunction::of_fiber(&self.polytope, &self.fiber)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": SCHEMA_VERSION,
            "outcome": "certified",
            "theorem": CERTIFICATE_TAG,
            "polytope": self.polytope,
            "fiber": self.fiber.iter().map(format_q).collect::<Vec<_>>(),
            "order": format_q(&self.order),
            "leading_stratum": self.leading_stratum,
            "branes": self.branes.iter().map(Brane::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ToricError> {
        let bad = |s: String| ToricError::Malformed(s);
        crate::complex::check_version(v).map_err(bad)?;
        if v.get("theorem").and_then(Value::as_str) != Some(CERTIFICATE_TAG) {
            return Err(bad("not a heaviness certificate".into()));
        }
        let polytope: MomentPolytope =
            serde_json::from_value(v.get("polytope").cloned().unwrap_or(Value::Null)).map_err(|e| bad(e.to_string()))?;
        let fiber = v
            .get("fiber")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing fiber".into()))?
            .iter()
            .map(value_to_q)
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?;
        let order = value_to_q(v.get("order").ok_or_else(|| bad("missing order".into()))?).map_err(bad)?;
        let leading_stratum = serde_json::from_value(v.get("leading_stratum").cloned().unwrap_or(json!([])))
            .map_err(|e| bad(e.to_string()))?;
        let branes = v
            .get("branes")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing branes".into()))?
            .iter()
            .map(Brane::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { polytope, fiber, order, leading_stratum, branes })
    }

    /// Re-derives every claim from the certificate data alone.
    pub fn verify(&self) -> Result<CertificateCheck, ToricError> {
        let polytope_valid = self.polytope.validate().is_valid();
        let w = self.potential()?;
        let order = ExtRational::Finite(self.order.clone());
        let mut branes = Vec::new();
        for b in &self.branes {
            let (recomputed, units) = match b.gradient_valuations(&w) {
                Ok(v) => (v.into_iter().max().unwrap_or(ExtRational::NegInfinity), true),
                Err(ToricError::NotUnit { .. }) => (ExtRational::NegInfinity, false),
                Err(e) => return Err(e),
            };
            let declared = b.residual_valuation().clone();
            let passed = units && recomputed <= declared && (declared < order || declared == ExtRational::NegInfinity);
            branes.push(BraneCheck { recomputed_residual: recomputed, declared_residual: declared, units, passed });
        }
        let leads: Vec<Vec<Complex64>> = self.branes.iter().map(Brane::leading).collect();
        let distinct = leads.iter().enumerate().all(|(i, a)| {
            leads[..i].iter().all(|b| a.iter().zip(b).any(|(p, q)| (p - q).norm() > 1e-6))
        });
        let passed = polytope_valid && distinct && !branes.is_empty() && branes.iter().all(|b| b.passed);
        Ok(CertificateCheck { polytope_valid, branes, distinct, passed })
    }
}

/// Exact value in `{±1, ±i}` (or `{±1}` for rational mode) near `z`.
fn snap(z: Complex64, mode: CoefficientMode) -> Option<GaussianRational> {
    let candidates: &[(i64, i64)] = match mode {
        CoefficientMode::Rational => &[(1, 0), (-1, 0)],
        CoefficientMode::Gaussian => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        CoefficientMode::Complex => &[],
    };
    candidates
        .iter()
        .find(|(a, b)| (z - Complex64::new(*a as f64, *b as f64)).norm() < SNAP_TOL)
        .map(|&(a, b)| GaussianRational::new(q(a, 1), q(b, 1)))
}

/// Lifts one leading root, exactly when every component snaps to a unit root.
pub fn lift_root(
    w: &PotentialFunction,
    root: &[Complex64],
    order: &Q,
    mode: CoefficientMode,
) -> Result<Brane, ToricError> {
    let snapped: Option<Vec<GaussianRational>> = root.iter().map(|&z| snap(z, mode)).collect();
    match snapped {
        Some(x0) => Ok(Brane::Exact(lift_critical(w, &x0, order)?)),
        None => {
            let x0: Vec<ComplexFloat> = root.iter().map(|&z| ComplexFloat::new(z)).collect();
            Ok(Brane::Numeric(lift_critical(w, &x0, order)?))
        }
    }
}

fn certify_unchecked(
    p: &MomentPolytope,
    lambda: &[Q],
    order: &Q,
    mode: CoefficientMode,
) -> Result<CertifyOutcome, ToricError> {
    let w = PotentialFunction::of_fiber(p, lambda)?;
    let leading = critical_points_leading(&w);
    let mut branes = Vec::new();
    let mut failed = Vec::new();
    for root in &leading.roots {
        match lift_root(&w, root, order, mode) {
            Ok(b) => branes.push(b),
            Err(e) => failed.push(e.to_string()),
        }
    }
    if branes.is_empty() {
        return Ok(CertifyOutcome::NoneFound(NoneFound {
            fiber: lambda.iter().map(format_q).collect(),
            leading_stratum: leading.system.stratum,
            leading: leading.status,
            degenerate_roots: leading.degenerate_roots.len(),
            failed_lifts: failed,
        }));
    }
    Ok(CertifyOutcome::Certified(HeavinessCertificate {
        polytope: p.clone(),
        fiber: lambda.to_vec(),
        order: order.clone(),
        leading_stratum: leading.system.stratum,
        branes,
    }))
}

fn require_valid(p: &MomentPolytope) -> Result<(), ToricError> {
    let report = p.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(ToricError::InvalidPolytope(report))
    }
}

/// Searches for critical branes at the fiber over `λ` and certifies heaviness when one lifts.
pub fn certify_heavy(
    p: &MomentPolytope,
    lambda: &[Q],
    order: &Q,
    mode: CoefficientMode,
) -> Result<CertifyOutcome, ToricError> {
    require_valid(p)?;
    certify_unchecked(p, lambda, order, mode)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub fiber: Vec<Q>,
    pub outcome: CertifyOutcome,
}

/// `certify_heavy` over the interior points of the `1/k` grid, in lexicographic order.
pub fn scan_fibers(
    p: &MomentPolytope,
    k: u32,
    order: &Q,
    mode: CoefficientMode,
) -> Result<Vec<ScanRow>, ToricError> {
    require_valid(p)?;
    p.grid(k)
        .into_par_iter()
        .map(|fiber| {
            let outcome = certify_unchecked(p, &fiber, order, mode)?;
            Ok(ScanRow { fiber, outcome })
        })
        .collect()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("fiber,certified,branes,leading_stratum,max_residual_valuation\n");
    for r in rows {
        let fiber = r.fiber.iter().map(format_q).collect::<Vec<_>>().join(" ");
        let (certified, n, stratum, res) = match &r.outcome {
            CertifyOutcome::Certified(c) => {
                let res = c.branes.iter().map(|b| b.residual_valuation().clone()).max().unwrap_or(ExtRational::NegInfinity);
                (true, c.branes.len(), &c.leading_stratum, res.to_string())
            }
            CertifyOutcome::NoneFound(n) => (false, 0, &n.leading_stratum, String::new()),
        };
        let stratum = stratum.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        out.push_str(&format!("{fiber},{certified},{n},{stratum},{res}\n"));
    }
    out
}
