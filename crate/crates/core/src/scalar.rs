//! Exact rational scalars and their string form.
//!
//! Rationals travel as strings (`"-3/4"`, `"5"`) in every interchange format;
//! plain JSON integers are accepted on input.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// `2^-k` as an exact rational.
pub fn dyadic(k: u32) -> Scalar {
    Scalar::new(BigInt::one(), BigInt::one() << k)
}

/// Parses `"a"`, `"a/b"` or a finite decimal such as `"-0.125"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Scalar::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut num = BigInt::from_str(&digits).map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Scalar::new(num, den));
    }
    BigInt::from_str(s)
        .map(Scalar::from_integer)
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// Lowest-terms `num/den`, or just `num` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator and denominator both overflow f64; scale down by bit length
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Scalar> {
    Scalar::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("non-finite value {x}")))
}

pub fn sign(x: &Scalar) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}

struct ScalarVisitor;

impl Visitor<'_> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a rational as \"num/den\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        parse_scalar(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::from_integer(BigInt::from(v)))
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
    d.deserialize_any(ScalarVisitor)
}

/// Serde adapter for `Vec<Scalar>`.
pub mod vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrapped(#[serde(with = "super")] Scalar);

    pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(format_scalar))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
        let v: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_scalar("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse_scalar(".5").unwrap(), ratio(1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn format_lowest_terms() {
        assert_eq!(format_scalar(&ratio(4, -6)), "-2/3");
        assert_eq!(format_scalar(&int(7)), "7");
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = 0.1f64;
        let q = from_f64(x).unwrap();
        assert_eq!(to_f64(&q), x);
        assert!(from_f64(f64::NAN).is_err());
    }
}
