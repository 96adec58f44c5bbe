//! Numeric helpers shared across the crate: the comparison tolerance,
//! exact-rational input parsing and rational recovery for reports.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute slack used in every distance and inequality comparison.
pub const TOL: f64 = 1e-9;

/// Largest denominator tried when recovering a rational from a float.
const MAX_DENOMINATOR: i64 = 1000;

/// Parses a decimal literal or an exact rational of the form `p/q`.
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::structural(format!("bad numerator in {text:?}")))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| Error::structural(format!("bad denominator in {text:?}")))?;
            if q == 0.0 {
                return Err(Error::structural(format!("zero denominator in {text:?}")));
            }
            p / q
        }
        None => text
            .parse()
            .map_err(|_| Error::structural(format!("not a number: {text:?}")))?,
    };
    if !value.is_finite() {
        return Err(Error::structural(format!("non-finite number {text:?}")));
    }
    Ok(value)
}

/// Recovers `p/q` (q ≤ 1000) when `x` is within [`TOL`] of it.
///
/// Uses the continued-fraction convergents of `x`, which are the best
/// approximations for their denominator size.
pub fn as_rational(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e9 {
        return None;
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let target = x.abs();
    let (mut h_prev, mut h) = (1i64, target.floor() as i64);
    let (mut k_prev, mut k) = (0i64, 1i64);
    let mut rest = target - target.floor();
    loop {
        if (target - h as f64 / k as f64).abs() <= TOL {
            return Some((sign * h, k));
        }
        if rest < 1e-12 {
            return None;
        }
        let inv = 1.0 / rest;
        let a = inv.floor() as i64;
        rest = inv - inv.floor();
        let (h_next, k_next) = (a * h + h_prev, a * k + k_prev);
        if k_next > MAX_DENOMINATOR {
            return None;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
    }
}

/// Formats `x` as `p/q` (or `p` for integers) when [`as_rational`] succeeds.
pub fn rational_string(x: f64) -> Option<String> {
    as_rational(x).map(|(p, q)| {
        if q == 1 {
            p.to_string()
        } else {
            format!("{p}/{q}")
        }
    })
}

/// A real number read from JSON either as a number or as a string such as
/// `"23/25"` or `"0.5"`. Serializes as a plain JSON number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Number(pub f64);

impl Number {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number(x)
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NumberVisitor;

        impl Visitor<'_> for NumberVisitor {
            type Value = Number;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string like \"p/q\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Number, E> {
                Ok(Number(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Number, E> {
                Ok(Number(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Number, E> {
                Ok(Number(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Number, E> {
                parse_number(v).map(Number).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(NumberVisitor)
    }
}

/// A value echoed in reports both as a decimal and, when exact, as a rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub decimal: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rational: Option<String>,
}

impl From<f64> for Exact {
    fn from(decimal: f64) -> Self {
        Exact {
            decimal,
            rational: rational_string(decimal),
        }
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(r) => write!(f, "{r} ({:.6})", self.decimal),
            None => write!(f, "{:.6}", self.decimal),
        }
    }
}
