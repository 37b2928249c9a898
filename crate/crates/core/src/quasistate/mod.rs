//! Homogenization of spectral oracles and checks of the quasi-state axioms.
//!
//! Spectral invariants of genuine Hamiltonians are not computed here. The
//! inputs are oracles: tabulated sequences `n ↦ c(e, nF)` (synthetic, supplied
//! by the user, or exported from families of filtered complexes) and
//! tabulated functionals on finite families of functions.
//!
//! Whether the functional built from the unit agrees with the one from
//! quantum cohomology is not something these checks can decide.

mod axioms;
mod real;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{ChainVector, ComplexError, FilteredComplex};
use crate::novikov::Coefficient;
use crate::rational::{q_to_f64, ExtRational, Q};

pub use axioms::{
    check_partial_quasistate, check_prequasimorphism, heaviness_check, infer_product_heaviness,
    product_quasistate_check, AxiomOutcome, AxiomStatus, FunctionalTable, GroupRelation, GroupTable,
    HeavinessReport, HeavinessViolation, PairCheck, ProductHeaviness, ProductReport, QuasiStateReport, Relation,
    SplitPair,
};
pub use real::Real;

/// Tolerance for comparisons that involve a floating value.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuasistateError {
    #[error("homogenization needs at least two distinct scales, got {0}")]
    TooFewSamples(usize),
    #[error("volume must be positive, got {0}")]
    NonPositiveVolume(String),
    #[error("empty sample grid")]
    EmptyGrid,
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("malformed declaration: {0}")]
    Malformed(String),
    #[error("{table} table has no value for {function:?}")]
    IncompleteTable { table: String, function: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleTag {
    Synthetic,
    DerivedFromComplex,
}

/// Samples `n ↦ c_n` of a spectral number along the scales `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOracle {
    pub samples: BTreeMap<u64, f64>,
    pub tag: OracleTag,
    /// A declared bound on `|c_n − s·n|`, making the estimate interval rigorous.
    pub bound: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct Sample {
    n: u64,
    c: Real,
}

#[derive(Serialize, Deserialize)]
struct OracleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    version: Option<u64>,
    samples: Vec<Sample>,
    tag: OracleTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<Real>,
}

impl SpectralOracle {
    pub fn new(samples: impl IntoIterator<Item = (u64, f64)>, tag: OracleTag) -> Self {
        Self { samples: samples.into_iter().collect(), tag, bound: None }
    }

    pub fn synthetic(f: impl Fn(u64) -> f64, scales: impl IntoIterator<Item = u64>) -> Self {
        Self::new(scales.into_iter().map(|n| (n, f(n))), OracleTag::Synthetic)
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    /// Samples `c(class)` on the complexes of a family indexed by scale.
    /// A class whose spectral number is −∞ at some scale is rejected.
    pub fn from_complexes<C: Coefficient>(
        family: impl IntoIterator<Item = (u64, FilteredComplex<C>)>,
        class: &ChainVector<C>,
    ) -> Result<Self, QuasistateError> {
        let mut samples = BTreeMap::new();
        for (n, c) in family {
            match c.spectral_number(class)?.value() {
                ExtRational::Finite(v) => {
                    samples.insert(n, q_to_f64(&v));
                }
                ExtRational::NegInfinity => {
                    return Err(QuasistateError::Malformed(format!("class vanishes at scale {n}")))
                }
            }
        }
        Ok(Self { samples, tag: OracleTag::DerivedFromComplex, bound: None })
    }

    pub fn to_json(&self) -> Value {
        let j = OracleJson {
            version: Some(crate::SCHEMA_VERSION),
            samples: self.samples.iter().map(|(&n, &c)| Sample { n, c: Real::Float(c) }).collect(),
            tag: self.tag,
            bound: self.bound.map(Real::Float),
        };
        serde_json::to_value(j).expect("oracle encodes")
    }

    pub fn from_json(v: &Value) -> Result<Self, QuasistateError> {
        let j: OracleJson = serde_json::from_value(v.clone()).map_err(|e| QuasistateError::Malformed(e.to_string()))?;
        if let Some(ver) = j.version {
            if ver != crate::SCHEMA_VERSION {
                return Err(QuasistateError::Malformed(format!("schema version {ver} is not supported")));
            }
        }
        let mut samples = BTreeMap::new();
        for s in j.samples {
            if s.n == 0 {
                return Err(QuasistateError::Malformed("scale 0".into()));
            }
            if samples.insert(s.n, s.c.to_f64()).is_some() {
                return Err(QuasistateError::Malformed(format!("scale {} repeated", s.n)));
            }
        }
        Ok(Self { samples, tag: j.tag, bound: j.bound.map(|b| b.to_f64()) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiStateEstimate {
    pub value: f64,
    /// `[lo, hi]` around `value`.
    pub slope_ci: [f64; 2],
    pub scales_used: Vec<u64>,
    pub max_residual: f64,
}

struct Fit {
    slope: f64,
    half_width: f64,
    max_residual: f64,
    scales: Vec<u64>,
}

/// Least-squares slope through the origin. Its error against the true slope
/// of `s·n + r(n)` is at most `max|r| · Σn / Σn²`.
fn fit(o: &SpectralOracle) -> Result<Fit, QuasistateError> {
    if o.samples.len() < 2 {
        return Err(QuasistateError::TooFewSamples(o.samples.len()));
    }
    let (mut sn, mut snn, mut snc) = (0.0, 0.0, 0.0);
    for (&n, &c) in &o.samples {
        let n = n as f64;
        sn += n;
        snn += n * n;
        snc += n * c;
    }
    let slope = snc / snn;
    let max_residual = o.samples.iter().map(|(&n, &c)| (c - slope * n as f64).abs()).fold(0.0, f64::max);
    let n_max = *o.samples.keys().last().expect("nonempty") as f64;
    let half_width = match o.bound {
        // the bound is attained by constant remainders, so allow for rounding
        Some(r) => r * sn / snn + 1e-12 * (1.0 + r + slope.abs()),
        None => max_residual / n_max,
    };
    Ok(Fit { slope, half_width, max_residual, scales: o.samples.keys().copied().collect() })
}

/// `ζ ≈ −lim c_n / n`.
pub fn homogenize(o: &SpectralOracle) -> Result<QuasiStateEstimate, QuasistateError> {
    let f = fit(o)?;
    let value = -f.slope;
    Ok(QuasiStateEstimate {
        value,
        slope_ci: [value - f.half_width, value + f.half_width],
        scales_used: f.scales,
        max_residual: f.max_residual,
    })
}

/// `μ ≈ vol · lim c_n / n`.
pub fn mu_from_oracle(o: &SpectralOracle, vol: &Q) -> Result<QuasiStateEstimate, QuasistateError> {
    if *vol <= Q::from_integer(0.into()) {
        return Err(QuasistateError::NonPositiveVolume(crate::rational::format_q(vol)));
    }
    let f = fit(o)?;
    let v = q_to_f64(vol);
    let value = v * f.slope;
    Ok(QuasiStateEstimate {
        value,
        slope_ci: [value - v * f.half_width, value + v * f.half_width],
        scales_used: f.scales,
        max_residual: f.max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// `sup ±H` over the sampled values of `H` on `[0,1] × Y`.
pub fn e_inf(values: impl IntoIterator<Item = f64>, sign: Sign) -> Result<f64, QuasistateError> {
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    values.into_iter().map(|h| s * h).reduce(f64::max).ok_or(QuasistateError::EmptyGrid)
}

/// `e_inf` of `h(t, p)` on the points of `y` at `time_steps + 1` equally spaced times.
pub fn e_inf_sampled(
    h: impl Fn(f64, &[f64]) -> f64,
    y: &[Vec<f64>],
    time_steps: usize,
    sign: Sign,
) -> Result<f64, QuasistateError> {
    let times: Vec<f64> = (0..=time_steps).map(|k| k as f64 / time_steps.max(1) as f64).collect();
    e_inf(times.iter().flat_map(|&t| y.iter().map(move |p| (t, p))).map(|(t, p)| h(t, p)), sign)
}
