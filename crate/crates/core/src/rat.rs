//! Exact rationals and their `"p/q"` text encoding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn format(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign as -1, 0, +1.
pub fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: shift both down to the f64 range first.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n: BigInt = r.numer() >> shift;
        let d: BigInt = r.denom() >> shift;
        n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
    })
}

/// Exact rational for an `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rat::zero(), |acc, v| acc + v)
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a rational as \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        parse(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat::from_integer(BigInt::from(v)))
    }
}

/// `#[serde(with = "rat::one")]` for a single rational.
pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Wrapped(#[serde(with = "one")] Rat);

/// `#[serde(with = "rat::vec")]` for a list of rationals.
pub mod vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<String> = v.iter().map(format).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let w: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "rat::mat")]` for a list of rational vectors.
pub mod mat {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(format).collect()).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let w: Vec<Vec<Wrapped>> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
    }
}

/// `#[serde(with = "rat::mat3")]` for lists of point lists.
pub mod mat3 {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(v: &[Vec<Vec<Rat>>], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Vec<Vec<String>>> = v
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(format).collect()).collect())
            .collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<Rat>>>, D::Error> {
        let w: Vec<Vec<Vec<Wrapped>>> = Vec::deserialize(d)?;
        Ok(w
            .into_iter()
            .map(|m| m.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
            .collect())
    }
}

/// `#[serde(with = "rat::opt")]` for an optional rational.
pub mod opt {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(d)?.map(|x| x.0))
    }
}
