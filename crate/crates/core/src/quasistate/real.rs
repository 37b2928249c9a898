use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_q, parse_q, q_to_f64, Q};

/// A table entry: exact when written as a rational string or integer.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(Q),
    Float(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(x) => q_to_f64(x),
            Real::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    fn lift(&self, other: &Real, exact: impl Fn(&Q, &Q) -> Q, float: impl Fn(f64, f64) -> f64) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(exact(a, b)),
            _ => Real::Float(float(self.to_f64(), other.to_f64())),
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        self.lift(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.lift(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.lift(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(a.abs()),
            Real::Float(a) => Real::Float(a.abs()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Real::Exact(a) => a.is_negative(),
            Real::Float(a) => *a < 0.0,
        }
    }

    pub fn zero() -> Real {
        Real::Exact(Q::zero())
    }

    /// Compares exactly when both sides are exact, otherwise up to `tol`.
    pub fn cmp_tol(&self, other: &Real, tol: f64) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => {
                let d = self.to_f64() - other.to_f64();
                if d.abs() <= tol {
                    Ordering::Equal
                } else if d < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn le_tol(&self, other: &Real, tol: f64) -> bool {
        self.cmp_tol(other, tol) != Ordering::Greater
    }

    pub fn eq_tol(&self, other: &Real, tol: f64) -> bool {
        self.cmp_tol(other, tol) == Ordering::Equal
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::Float(x)
    }
}

impl From<Q> for Real {
    fn from(x: Q) -> Self {
        Real::Exact(x)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(x) => f.write_str(&format_q(x)),
            Real::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(x) => s.serialize_str(&format_q(x)),
            Real::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => parse_q(&s).map(Real::Exact).map_err(de::Error::custom),
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Real::Exact(Q::from_integer(i.into()))),
                None => n.as_f64().map(Real::Float).ok_or_else(|| de::Error::custom("number out of range")),
            },
            other => Err(de::Error::custom(format!("expected a number or rational string, got {other}"))),
        }
    }
}
