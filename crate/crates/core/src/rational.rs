//! Exact rationals, the extended line `Q ∪ {−∞}`, and their string encodings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number used for exponents, actions and periods.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"3"`, `"-3/2"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let digits = format!("{int_digits}{frac}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| err())
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Gcd of rationals: the positive generator of the subgroup `Σ Z·xᵢ`.
/// Returns zero when every input is zero.
pub fn gcd_q<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Q {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        // gcd(a/b, c/d) = gcd(ad, cb) / bd, then reduce.
        let new_den = den.lcm(x.denom());
        let a = &num * (&new_den / &den);
        let b = x.numer().abs() * (&new_den / x.denom());
        num = a.gcd(&b);
        den = new_den;
    }
    BigRational::new(num, den)
}

/// Serde adapter writing a rational as its string form.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_q(&v).map_err(de::Error::custom)
    }
}

pub mod q_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(format_q).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter().map(|x| value_to_q(x).map_err(de::Error::custom)).collect()
    }
}

/// Accepts a JSON string (`"3/2"`) or an integer literal.
pub fn value_to_q(v: &serde_json::Value) -> Result<Q, String> {
    match v {
        serde_json::Value::String(s) => parse_q(s).map_err(|e| e.to_string()),
        serde_json::Value::Number(n) if n.is_i64() => Ok(qi(n.as_i64().unwrap())),
        other => Err(format!("expected rational string, got {other}")),
    }
}

/// A rational or −∞. Used for valuations, levels and truncation floors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInfinity,
    Finite(Q),
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtRational::Finite(x) => Some(x),
            ExtRational::NegInfinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn max(self, other: ExtRational) -> ExtRational {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::NegInfinity, ExtRational::NegInfinity) => Ordering::Equal,
            (ExtRational::NegInfinity, _) => Ordering::Less,
            (_, ExtRational::NegInfinity) => Ordering::Greater,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<Q> for ExtRational {
    fn from(x: Q) -> Self {
        ExtRational::Finite(x)
    }
}

impl Add<&Q> for &ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &Q) -> ExtRational {
        match self {
            ExtRational::NegInfinity => ExtRational::NegInfinity,
            ExtRational::Finite(x) => ExtRational::Finite(x + rhs),
        }
    }
}

impl Add for &ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::NegInfinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInfinity => f.write_str("-inf"),
            ExtRational::Finite(x) => f.write_str(&format_q(x)),
        }
    }
}

impl FromStr for ExtRational {
    type Err = ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" | "-infinity" => Ok(ExtRational::NegInfinity),
            t => parse_q(t).map(ExtRational::Finite),
        }
    }
}

/// Encoded as the rational string, or JSON `null` for −∞.
impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtRational::NegInfinity => s.serialize_none(),
            ExtRational::Finite(x) => s.serialize_str(&format_q(x)),
        }
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Null => Ok(ExtRational::NegInfinity),
            serde_json::Value::String(s) => s.parse().map_err(de::Error::custom),
            other => value_to_q(other).map(ExtRational::Finite).map_err(de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_q("-6/4").unwrap(), q(-3, 2));
        assert_eq!(parse_q("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn gcd_of_periods() {
        assert_eq!(gcd_q(&[q(1, 2), q(1, 3)]), q(1, 6));
        assert_eq!(gcd_q(&[q(3, 2), qi(3)]), q(3, 2));
        assert_eq!(gcd_q(&[qi(0)]), qi(0));
    }

    #[test]
    fn neg_infinity_is_least() {
        assert!(ExtRational::NegInfinity < ExtRational::Finite(qi(-1000)));
        assert_eq!(
            ExtRational::NegInfinity.max(ExtRational::Finite(qi(2))),
            ExtRational::Finite(qi(2))
        );
    }
}
