use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::coeff::Coefficient;
use super::NovikovError;
use crate::rational::{format_q, value_to_q, ExtRational, Q};

/// One term `coeff · q^exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<C> {
    pub coeff: C,
    pub exp: Q,
}

/// Truncated element of the downward Novikov field.
///
/// Terms are kept in strictly decreasing exponent order with nonzero
/// coefficients. `floor` is the truncation threshold: the value is known
/// exactly for every exponent `>= floor`, and terms below it are discarded.
/// A floor of −∞ means the finite sum is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct NovikovScalar<C> {
    terms: Vec<Term<C>>,
    floor: ExtRational,
}

impl<C: Coefficient> NovikovScalar<C> {
    pub fn new(terms: impl IntoIterator<Item = (C, Q)>, floor: ExtRational) -> Self {
        let mut acc: BTreeMap<Q, C> = BTreeMap::new();
        for (c, e) in terms {
            accumulate(&mut acc, e, c);
        }
        Self::from_map(acc, floor)
    }

    fn from_map(acc: BTreeMap<Q, C>, floor: ExtRational) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(e, c)| !c.is_zero() && above(e, &floor))
            .map(|(exp, coeff)| Term { coeff, exp })
            .collect();
        Self { terms, floor }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new(), floor: ExtRational::NegInfinity }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, Q::zero())
    }

    pub fn monomial(c: C, exp: Q) -> Self {
        Self::new([(c, exp)], ExtRational::NegInfinity)
    }

    /// `q^exp`.
    pub fn q_pow(exp: Q) -> Self {
        Self::monomial(C::one(), exp)
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn floor(&self) -> &ExtRational {
        &self.floor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no truncation has happened (floor −∞).
    pub fn is_exact(&self) -> bool {
        !self.floor.is_finite()
    }

    /// Leading exponent; −∞ for zero.
    pub fn valuation(&self) -> ExtRational {
        self.terms
            .first()
            .map_or(ExtRational::NegInfinity, |t| ExtRational::Finite(t.exp.clone()))
    }

    /// Upper bound on the valuation of the true value: the larger of the
    /// computed valuation and the floor.
    pub fn valuation_bound(&self) -> ExtRational {
        self.valuation().max(self.floor.clone())
    }

    pub fn leading_term(&self) -> Option<&Term<C>> {
        self.terms.first()
    }

    pub fn coeff_at(&self, exp: &Q) -> Option<&C> {
        self.terms.iter().find(|t| &t.exp == exp).map(|t| &t.coeff)
    }

    /// Units of `Λ₀` in the downward convention: valuation exactly zero.
    pub fn is_unit(&self) -> bool {
        self.valuation() == ExtRational::Finite(Q::zero())
    }

    /// Drops terms below `floor`, raising the threshold if it is stronger.
    pub fn truncate(&self, floor: &ExtRational) -> Self {
        let floor = self.floor.clone().max(floor.clone());
        let terms = self.terms.iter().filter(|t| above(&t.exp, &floor)).cloned().collect();
        Self { terms, floor }
    }

    /// Declares the finite sum exact (floor −∞).
    pub fn into_exact(mut self) -> Self {
        self.floor = ExtRational::NegInfinity;
        self
    }

    pub fn with_floor(mut self, floor: ExtRational) -> Self {
        self.floor = floor;
        self.terms.retain(|t| above(&t.exp, &self.floor));
        self
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.terms.iter().map(|t| (c.clone() * t.coeff.clone(), t.exp.clone())),
            self.floor.clone(),
        )
    }

    /// Multiplication by `q^w`.
    pub fn shift(&self, w: &Q) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: t.coeff.clone(), exp: &t.exp + w })
                .collect(),
            floor: &self.floor + w,
        }
    }

    /// Sum; the weaker floor wins.
    pub fn add_ref(&self, other: &Self) -> Self {
        let floor = self.floor.clone().max(other.floor.clone());
        let mut acc = BTreeMap::new();
        for t in self.terms.iter().chain(other.terms.iter()) {
            accumulate(&mut acc, t.exp.clone(), t.coeff.clone());
        }
        Self::from_map(acc, floor)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: -t.coeff.clone(), exp: t.exp.clone() })
                .collect(),
            floor: self.floor.clone(),
        }
    }

    /// Cauchy product. The result floor is the precision-sound bound
    /// `max(floor_x + v(y), floor_y + v(x))`, which equals the weaker floor
    /// when both factors are units.
    pub fn mul_ref(&self, other: &Self) -> Self {
        let floor = (&self.floor + &other.valuation_bound()).max(&other.floor + &self.valuation_bound());
        self.mul_truncated(other, &floor)
    }

    /// Product cut at `target` (or at the sound floor if that is weaker),
    /// without forming the discarded terms.
    pub fn mul_to(&self, other: &Self, target: &ExtRational) -> Self {
        let floor = (&self.floor + &other.valuation_bound()).max(&other.floor + &self.valuation_bound());
        self.mul_truncated(other, &floor.max(target.clone()))
    }

    fn mul_truncated(&self, other: &Self, floor: &ExtRational) -> Self {
        let mut acc = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let e = &a.exp + &b.exp;
                if above(&e, floor) {
                    accumulate(&mut acc, e, a.coeff.clone() * b.coeff.clone());
                } else {
                    // exponents of `other` only decrease from here
                    break;
                }
            }
        }
        Self::from_map(acc, floor.clone())
    }

    /// Multiplicative inverse, truncated where the input's precision runs
    /// out (`floor − 2·v(x)`).
    pub fn invert(&self) -> Result<Self, NovikovError> {
        self.invert_to(&ExtRational::NegInfinity)
    }

    /// Multiplicative inverse; an infinite inverse series is cut at `target`
    /// (or at the input's precision limit, whichever is weaker).
    pub fn invert_to(&self, target: &ExtRational) -> Result<Self, NovikovError> {
        let lead = self.leading_term().ok_or(NovikovError::ZeroInverse)?;
        let lead_inv = lead.coeff.inv().ok_or(NovikovError::ZeroInverse)?;
        let v = lead.exp.clone();
        // precision of the input propagates as floor - 2v
        let precision = &self.floor + &(-(&v + &v));
        if self.terms.len() == 1 {
            return Ok(Self {
                terms: vec![Term { coeff: lead_inv, exp: -v }],
                floor: precision,
            });
        }
        let floor = precision.max(target.clone());
        let Some(f) = floor.finite() else {
            return Err(NovikovError::InfiniteInverse);
        };
        // x = c q^v (1 + t) with v(t) < 0; 1/x = c^{-1} q^{-v} Σ (-t)^k
        // y = 1/(1 + t) solves y = 1 - t·y; fill coefficients in decreasing exponent order
        let t: Vec<(Q, C)> = self.terms[1..]
            .iter()
            .map(|term| (&term.exp - &v, lead_inv.clone() * term.coeff.clone()))
            .collect();
        let mut known: BTreeMap<Q, C> = BTreeMap::new();
        let mut frontier: BTreeSet<Q> = BTreeSet::from([Q::zero()]);
        while let Some(e) = frontier.pop_last() {
            let mut c = if e.is_zero() { C::one() } else { C::zero() };
            for (s, ts) in &t {
                if let Some(y) = known.get(&(&e - s)) {
                    c = c - ts.clone() * y.clone();
                }
            }
            for (s, _) in &t {
                let next = &e + s;
                if next >= f + &v {
                    frontier.insert(next);
                }
            }
            known.insert(e, c);
        }
        let sum = Self::from_map(known, ExtRational::NegInfinity);
        let out = Self::new(
            sum.terms.iter().map(|t| (lead_inv.clone() * t.coeff.clone(), &t.exp - &v)),
            floor,
        );
        Ok(out)
    }

    /// Exponential truncated at this scalar's own floor.
    pub fn exp(&self) -> Result<Self, NovikovError> {
        self.exp_to(&self.floor.clone())
    }

    /// Exponential of an element of `Λ₀ = {v_q ≤ 0}`. The constant part is
    /// exponentiated in the coefficient field; the strictly negative part
    /// via its power series, cut at `target`.
    pub fn exp_to(&self, target: &ExtRational) -> Result<Self, NovikovError> {
        if let Some(v) = self.valuation().finite() {
            if v > &Q::zero() {
                return Err(NovikovError::ExpDiverges(format_q(v)));
            }
        }
        let zero = Q::zero();
        let c0 = self.coeff_at(&zero).cloned().unwrap_or_else(C::zero);
        let e0 = c0.exp().ok_or(NovikovError::ExpNotRepresentable)?;
        let tail = Self::new(
            self.terms.iter().filter(|t| t.exp < zero).map(|t| (t.coeff.clone(), t.exp.clone())),
            ExtRational::NegInfinity,
        );
        if tail.is_zero() {
            return Ok(Self::constant(e0).with_floor(self.floor.clone()));
        }
        let floor = self.floor.clone().max(target.clone());
        if !floor.is_finite() {
            return Err(NovikovError::InfiniteInverse);
        }
        let mut sum = Self::one();
        let mut power = Self::one();
        let mut k: i64 = 0;
        loop {
            k += 1;
            power = power
                .mul_truncated(&tail, &floor)
                .scale(&C::from_q(&Q::new(One::one(), k.into())));
            if power.is_zero() {
                break;
            }
            sum = sum.add_ref(&power);
        }
        Ok(sum.scale(&e0).with_floor(floor))
    }

    /// Integer power; negative powers invert first with the given target floor.
    pub fn powi(&self, k: i64, target: &ExtRational) -> Result<Self, NovikovError> {
        let base = if k < 0 { self.invert_to(target)? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_to(&base, target);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|t| json!({"c": t.coeff.encode(), "exp": format_q(&t.exp)})).collect::<Vec<_>>(),
            "floor": serde_json::to_value(&self.floor).expect("floor encodes"),
        })
    }

    /// Accepts either `{terms, floor}` or a bare term list.
    pub fn from_json(v: &Value) -> Result<Self, String> {
        let (terms, floor) = match v {
            Value::Array(_) => (v, ExtRational::NegInfinity),
            Value::Object(m) => {
                let terms = m.get("terms").ok_or("missing \"terms\"")?;
                let floor = match m.get("floor") {
                    None => ExtRational::NegInfinity,
                    Some(f) => serde_json::from_value(f.clone()).map_err(|e| e.to_string())?,
                };
                (terms, floor)
            }
            _ => return Err("expected Novikov scalar".into()),
        };
        Self::terms_from_json(terms, floor)
    }

    pub fn terms_from_json(terms: &Value, floor: ExtRational) -> Result<Self, String> {
        let arr = terms.as_array().ok_or("expected term list")?;
        let mut out = Vec::with_capacity(arr.len());
        for t in arr {
            let c = t.get("c").or_else(|| t.get("coeff")).ok_or("term without \"c\"")?;
            let e = t.get("exp").ok_or("term without \"exp\"")?;
            out.push((C::decode(c)?, value_to_q(e)?));
        }
        Ok(Self::new(out, floor))
    }
}

fn above(e: &Q, floor: &ExtRational) -> bool {
    match floor {
        ExtRational::NegInfinity => true,
        ExtRational::Finite(f) => e >= f,
    }
}

fn accumulate<C: Coefficient>(acc: &mut BTreeMap<Q, C>, e: Q, c: C) {
    match acc.remove(&e) {
        Some(prev) => {
            acc.insert(e, prev + c);
        }
        None => {
            acc.insert(e, c);
        }
    }
}

impl<C: Coefficient> Add for &NovikovScalar<C> {
    type Output = NovikovScalar<C>;
    fn add(self, rhs: Self) -> NovikovScalar<C> {
        self.add_ref(rhs)
    }
}

impl<C: Coefficient> Sub for &NovikovScalar<C> {
    type Output = NovikovScalar<C>;
    fn sub(self, rhs: Self) -> NovikovScalar<C> {
        self.sub_ref(rhs)
    }
}

impl<C: Coefficient> Mul for &NovikovScalar<C> {
    type Output = NovikovScalar<C>;
    fn mul(self, rhs: Self) -> NovikovScalar<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coefficient> Neg for &NovikovScalar<C> {
    type Output = NovikovScalar<C>;
    fn neg(self) -> NovikovScalar<C> {
        self.neg_ref()
    }
}

impl<C: Coefficient + fmt::Debug> fmt::Display for NovikovScalar<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})q^{}", t.coeff.encode(), format_q(&t.exp))?;
        }
        if let ExtRational::Finite(fl) = &self.floor {
            write!(f, " [floor {}]", format_q(fl))?;
        }
        Ok(())
    }
}

impl<C: Coefficient> Serialize for NovikovScalar<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for NovikovScalar<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(de::Error::custom)
    }
}
