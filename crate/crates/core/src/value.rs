//! Exact rational money and valuation type.
//!
//! Every type, bid, tax and utility in the engine is a [`Value`]. Values are
//! kept in lowest terms with a positive denominator, so equality is
//! structural and sums such as an aggregate tax of zero come out exactly.
//!
//! Text form: the parser accepts integers (`"4"`), decimals (`"2.5"`,
//! `"-0.25"`) and fractions (`"10/3"`); the emitter writes `p/q`, dropping
//! the denominator when it is 1.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(Ratio<i128>);

impl Value {
    pub const fn integer(n: i128) -> Self {
        Value(Ratio::new_raw(n, 1))
    }

    pub fn zero() -> Self {
        Value::integer(0)
    }

    /// `numer / denom` reduced to lowest terms.
    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ParseValue(format!("{numer}/{denom}")));
        }
        Ok(Value(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Fails with [`Error::Negative`] unless `self >= 0`.
    pub fn non_negative(self) -> Result<Self> {
        if self.is_negative() {
            Err(Error::Negative(self.to_string()))
        } else {
            Ok(self)
        }
    }

    pub fn max(self, other: Value) -> Value {
        std::cmp::max(self, other)
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::integer(n as i128)
    }
}

impl From<i32> for Value {
    fn from(n: i32) -> Self {
        Value::integer(n as i128)
    }
}

impl From<u32> for Value {
    fn from(n: u32) -> Self {
        Value::integer(n as i128)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl AddAssign for Value {
    fn add_assign(&mut self, rhs: Value) {
        self.0 += rhs.0;
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        Value(self.0 - rhs.0)
    }
}

impl Mul for Value {
    type Output = Value;
    fn mul(self, rhs: Value) -> Value {
        Value(self.0 * rhs.0)
    }
}

/// Panics on division by zero, like the integer types.
impl Div for Value {
    type Output = Value;
    fn div(self, rhs: Value) -> Value {
        Value(self.0 / rhs.0)
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::zero(), Add::add)
    }
}

impl<'a> Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        iter.copied().sum()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, original: &str) -> Result<i128> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::ParseValue(original.to_string()));
    }
    s.parse::<i128>()
        .map_err(|_| Error::ParseValue(original.to_string()))
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Value> {
        let s = raw.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let magnitude = if let Some((p, q)) = body.split_once('/') {
            let q = parse_int(q, raw)?;
            if q == 0 {
                return Err(Error::ParseValue(raw.to_string()));
            }
            Value::new(parse_int(p, raw)?, q)?
        } else if let Some((whole, frac)) = body.split_once('.') {
            let whole = if whole.is_empty() {
                0
            } else {
                parse_int(whole, raw)?
            };
            let digits = parse_int(frac, raw)?;
            let scale = 10i128
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| Error::ParseValue(raw.to_string()))?;
            let numer = whole
                .checked_mul(scale)
                .and_then(|w| w.checked_add(digits))
                .ok_or_else(|| Error::ParseValue(raw.to_string()))?;
            Value::new(numer, scale)?
        } else {
            Value::integer(parse_int(body, raw)?)
        };
        Ok(if negative { -magnitude } else { magnitude })
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct ValueVisitor;

impl Visitor<'_> for ValueVisitor {
    type Value = Value;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational string such as \"4\", \"2.5\" or \"10/3\", or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Value, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Value, E> {
        Ok(Value::integer(v as i128))
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Value, D::Error> {
        deserializer.deserialize_any(ValueVisitor)
    }
}
