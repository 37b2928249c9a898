use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::rational::{format_q, q_to_f64, value_to_q, Q};

/// Default zero-test threshold of the floating coefficient field.
pub const DEFAULT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientMode {
    Rational,
    Gaussian,
    Complex,
}

impl fmt::Display for CoefficientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientMode::Rational => "rational",
            CoefficientMode::Gaussian => "gaussian",
            CoefficientMode::Complex => "complex",
        })
    }
}

/// A coefficient field for Novikov series.
///
/// Exact fields test zero exactly. The floating field compares against the
/// epsilon carried by each value.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const MODE: CoefficientMode;

    fn from_q(x: &Q) -> Self;
    fn inv(&self) -> Option<Self>;
    /// `exp` inside the field, when the value is representable there.
    fn exp(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// True when a nonzero value sits within ten thresholds of zero.
    fn near_threshold(&self) -> bool {
        false
    }
    fn encode(&self) -> Value;
    fn decode(v: &Value) -> Result<Self, String>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&BigRational::from_integer(n.into()))
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Coefficient for BigRational {
    const MODE: CoefficientMode = CoefficientMode::Rational;

    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn exp(&self) -> Option<Self> {
        self.is_zero().then(One::one)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(q_to_f64(self), 0.0)
    }
    fn encode(&self) -> Value {
        Value::String(format_q(self))
    }
    fn decode(v: &Value) -> Result<Self, String> {
        value_to_q(v)
    }
}

/// `a + b·i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(Zero::zero(), One::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() {
            return Self::new(&self.re * &o.re, &self.re * &o.im);
        }
        if o.im.is_zero() {
            return Self::new(&self.re * &o.re, &self.im * &o.re);
        }
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(Zero::zero(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(One::one(), Zero::zero())
    }
}

impl Coefficient for GaussianRational {
    const MODE: CoefficientMode = CoefficientMode::Gaussian;

    fn from_q(x: &Q) -> Self {
        Self::new(x.clone(), Zero::zero())
    }
    fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        (!n.is_zero()).then(|| Self::new(&self.re / &n, -&self.im / &n))
    }
    fn exp(&self) -> Option<Self> {
        self.is_zero().then(One::one)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    fn encode(&self) -> Value {
        json!({ "re": format_q(&self.re), "im": format_q(&self.im) })
    }
    fn decode(v: &Value) -> Result<Self, String> {
        match v {
            Value::Object(m) => {
                let re = m.get("re").map(value_to_q).transpose()?.unwrap_or_else(Zero::zero);
                let im = m.get("im").map(value_to_q).transpose()?.unwrap_or_else(Zero::zero);
                Ok(Self::new(re, im))
            }
            other => value_to_q(other).map(|re| Self::new(re, Zero::zero())),
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_q(&self.re)),
            (true, false) => write!(f, "{}i", format_q(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", format_q(&self.re), sign, format_q(&self.im.abs()))
            }
        }
    }
}

/// Complex double with a zero-test threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFloat {
    pub z: Complex64,
    pub eps: f64,
}

impl ComplexFloat {
    pub fn new(z: Complex64) -> Self {
        Self { z, eps: DEFAULT_EPS }
    }

    pub fn with_eps(z: Complex64, eps: f64) -> Self {
        assert!(eps > 0.0, "floating coefficient tolerance must be positive");
        Self { z, eps }
    }

    fn combine(self, o: Self, z: Complex64) -> Self {
        Self { z, eps: self.eps.max(o.eps) }
    }
}

impl Add for ComplexFloat {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.combine(o, self.z + o.z)
    }
}

impl Sub for ComplexFloat {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.combine(o, self.z - o.z)
    }
}

impl Mul for ComplexFloat {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.combine(o, self.z * o.z)
    }
}

impl Neg for ComplexFloat {
    type Output = Self;
    fn neg(self) -> Self {
        Self { z: -self.z, eps: self.eps }
    }
}

impl Zero for ComplexFloat {
    fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0))
    }
    /// Zero test against the carried epsilon.
    fn is_zero(&self) -> bool {
        self.z.norm() < self.eps
    }
}

impl One for ComplexFloat {
    fn one() -> Self {
        Self::new(Complex64::new(1.0, 0.0))
    }
}

impl Coefficient for ComplexFloat {
    const MODE: CoefficientMode = CoefficientMode::Complex;

    fn from_q(x: &Q) -> Self {
        Self::new(Complex64::new(q_to_f64(x), 0.0))
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self { z: self.z.inv(), eps: self.eps })
    }
    fn exp(&self) -> Option<Self> {
        Some(Self { z: self.z.exp(), eps: self.eps })
    }
    fn to_complex(&self) -> Complex64 {
        self.z
    }
    fn near_threshold(&self) -> bool {
        let r = self.z.norm();
        r >= self.eps && r < 10.0 * self.eps
    }
    fn encode(&self) -> Value {
        json!({ "re": self.z.re, "im": self.z.im })
    }
    fn decode(v: &Value) -> Result<Self, String> {
        let part = |x: Option<&Value>| -> Result<f64, String> {
            match x {
                None => Ok(0.0),
                Some(Value::Number(n)) => n.as_f64().ok_or_else(|| "bad number".to_string()),
                Some(other) => value_to_q(other).map(|r| q_to_f64(&r)),
            }
        };
        match v {
            Value::Object(m) => Ok(Self::new(Complex64::new(part(m.get("re"))?, part(m.get("im"))?))),
            other => part(Some(other)).map(|re| Self::new(Complex64::new(re, 0.0))),
        }
    }
}
