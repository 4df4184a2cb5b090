//! Exact rational scalars and their `"p/q"` wire format.
//!
//! Every coordinate in the crate is a [`Rat`]: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. JSON carries
//! rationals as strings, `"p/q"` with `q >= 1`, so values survive round-trips
//! without loss.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type Rat = BigRational;

/// Builds a rational from machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat_int(2)
}

/// Floor of a rational as a big integer.
pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn fract(r: &Rat) -> Rat {
    r - Rat::from_integer(floor_int(r))
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Canonical text form: always `p/q`, reduced, denominator positive.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| ParseRatError::Malformed(s.to_owned()))?;
    let den: BigInt = den_str
        .trim()
        .parse()
        .map_err(|_| ParseRatError::Malformed(s.to_owned()))?;
    if den.is_zero() {
        return Err(ParseRatError::ZeroDenominator(s.to_owned()));
    }
    Ok(BigRational::new(num, den))
}

/// Serde adapter for a single `Rat` field, string encoded.
pub mod rat_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>` fields.
pub mod rat_vec_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rat).collect();
        strings.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        strings
            .iter()
            .map(|s| parse_rat(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rat>>` fields (per-axis cut grids).
pub mod rat_grid_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], ser: S) -> Result<S::Ok, S::Error> {
        let grid: Vec<Vec<String>> = v
            .iter()
            .map(|axis| axis.iter().map(format_rat).collect())
            .collect();
        grid.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let grid = Vec::<Vec<String>>::deserialize(de)?;
        grid.iter()
            .map(|axis| {
                axis.iter()
                    .map(|s| parse_rat(s).map_err(de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Display helper so diagnostics stay in the wire format.
pub struct DisplayRat<'a>(pub &'a Rat);

impl fmt::Display for DisplayRat<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rat(self.0))
    }
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zero() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-2/5", "0/1", "7/1"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_rat("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("5").unwrap(), rat_int(5));
        assert_eq!(parse_rat("-4/-6").unwrap(), rat(2, 3));
        assert_eq!(format_rat(&parse_rat("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("1/2/3").is_err());
    }

    #[test]
    fn fract_in_unit_interval() {
        assert_eq!(fract(&rat(7, 2)), rat(1, 2));
        assert_eq!(fract(&rat(-1, 4)), rat(3, 4));
        assert_eq!(fract(&rat_int(3)), rat_int(0));
    }
}
