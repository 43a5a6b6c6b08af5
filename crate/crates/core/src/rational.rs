//! Exact rational scalars and their string form.
//!
//! Rationals are written as `"p/q"` in lowest terms, integers without a
//! denominator (`"2"`, `"-1/2"`, `"3/4"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| ParseRationalError(s.into()))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| ParseRationalError(s.into()))?;
        if d.is_zero() {
            return Err(ParseRationalError(s.into()));
        }
        Ok(Rational::new(n, d))
    } else {
        BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| ParseRationalError(s.into()))
    }
}

/// Canonical string: lowest terms, positive denominator, no `/1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow(r: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Serde adapter storing a rational as its canonical string.
pub mod as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts both `"3/4"` and bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Str(String),
        Int(i64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, ParseRationalError> {
            match self {
                RawRational::Str(s) => parse_rational(&s),
                RawRational::Int(n) => Ok(int(n)),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec_as_string {
    use super::as_string::RawRational;
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RawRational>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 2 ").unwrap(), int(2));
        assert_eq!(format_rational(&ratio(6, 3)), "2");
        assert_eq!(format_rational(&ratio(1, -2)), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
