//! Exact rational arithmetic helpers.
//!
//! Costs, dual values, and slack amounts are all `BigRational`. The engine
//! depends on exact tightness detection (a slack of zero must compare equal
//! to zero), so floating point is never used for anything load-bearing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Cost = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn zero() -> Cost {
    BigRational::zero()
}

pub fn one() -> Cost {
    BigRational::one()
}

pub fn from_int(v: i64) -> Cost {
    BigRational::from_integer(BigInt::from(v))
}

/// `1 / 2^k`, the dual increment of wave `k` in the lower-bound experiment.
pub fn inverse_power_of_two(k: u32) -> Cost {
    BigRational::new(BigInt::one(), BigInt::from(2u64).pow(k))
}

/// Parses a nonnegative rational written as an integer (`3`), a decimal
/// (`1.25`), or an explicit fraction (`5/4`). Decimal digits are converted
/// exactly via a power-of-ten denominator.
pub fn parse_rational(text: &str) -> Result<Cost, RationalParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| RationalParseError::Malformed(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| RationalParseError::Malformed(s.to_string()))?;
        if d.is_zero() {
            return Err(RationalParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError::Malformed(s.to_string()));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| RationalParseError::Malformed(s.to_string()))?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| RationalParseError::Malformed(s.to_string()))?;
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(signed, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| RationalParseError::Malformed(s.to_string()))?;
    Ok(BigRational::from_integer(n))
}

/// Renders a rational as `p` for integers and `p/q` otherwise. This is the
/// wire format used in traces and reports; [`parse_rational`] reads it back.
pub fn format_rational(v: &Cost) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// serde adapter: rationals serialize as their `format_rational` string.
pub mod serde_cost {
    use super::{format_rational, parse_rational, Cost};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Cost, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Cost, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_decimal_and_fraction_forms() {
        assert_eq!(parse_rational("3").unwrap(), from_int(3));
        assert_eq!(parse_rational("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("5/4").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("0.5").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational(".5").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("1.x").is_err());
    }

    #[test]
    fn format_roundtrips() {
        for text in ["7", "3/2", "1/8", "0"] {
            let v = parse_rational(text).unwrap();
            assert_eq!(format_rational(&v), *text);
            assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
        // Decimals normalize to fraction form.
        assert_eq!(format_rational(&parse_rational("1.25").unwrap()), "5/4");
    }

    #[test]
    fn wave_increments_halve() {
        assert_eq!(inverse_power_of_two(1), parse_rational("1/2").unwrap());
        assert_eq!(inverse_power_of_two(6), parse_rational("1/64").unwrap());
    }
}
