//! Exact scalars: arbitrary-precision rationals and their extension by `+∞`.
//!
//! Every quantity on the exact side of the crate (times, anchor values,
//! parameters, finite exponents) is a [`Rational`]. Rationals travel through
//! JSON and the command line as fraction strings (`"p/q"`); decimal notation
//! is rejected so that no value is ever silently rounded.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("`{0}` is not a fraction of integers (decimals are not accepted)")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

/// `num/den` as a [`Rational`]. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a [`Rational`].
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |s: &str| -> Result<BigInt, ParseRationalError> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(text.to_string()));
        }
        BigInt::from_str(s.strip_prefix('+').unwrap_or(s))
            .map_err(|_| ParseRationalError::Malformed(text.to_string()))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

/// Fraction-string form, always with an explicit denominator (`"7/1"`, `"-3/2"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to a finite `f64`.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Serde adapter for a single [`Rational`] as a fraction string.
pub mod serde_frac {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_frac_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let texts: Vec<String> = values.iter().map(format_rational).collect();
        texts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_frac_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let texts: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        texts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let texts = Vec::<Vec<String>>::deserialize(d)?;
        texts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// A rational or `+∞`. `+∞` compares above every rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    pub fn finite(value: Rational) -> Self {
        ExtendedRational::Finite(value)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(v) => Some(v),
            ExtendedRational::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedRational::Finite(v) => to_f64(v),
            ExtendedRational::Infinity => f64::INFINITY,
        }
    }

    /// `1/x` on `[0, +∞]`: `1/0 = +∞` and `1/+∞ = 0`.
    pub fn recip(&self) -> ExtendedRational {
        match self {
            ExtendedRational::Infinity => ExtendedRational::Finite(Rational::zero()),
            ExtendedRational::Finite(v) if v.is_zero() => ExtendedRational::Infinity,
            ExtendedRational::Finite(v) => ExtendedRational::Finite(v.recip()),
        }
    }

    /// Sum, with `+∞` absorbing.
    pub fn add(&self, other: &ExtendedRational) -> ExtendedRational {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => {
                ExtendedRational::Finite(a + b)
            }
            _ => ExtendedRational::Infinity,
        }
    }

    /// `self - other`; `None` for `∞ - ∞` and for results below every rational.
    pub fn checked_sub(&self, other: &ExtendedRational) -> Option<ExtendedRational> {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => {
                Some(ExtendedRational::Finite(a - b))
            }
            (ExtendedRational::Infinity, ExtendedRational::Finite(_)) => {
                Some(ExtendedRational::Infinity)
            }
            _ => None,
        }
    }

    /// Exponent `w` with `1/(1+w) = ratio`, i.e. `1/ratio - 1`; a zero ratio gives `+∞`.
    pub fn exponent_from_ratio(ratio: &Rational) -> ExtendedRational {
        if ratio.is_zero() {
            ExtendedRational::Infinity
        } else {
            ExtendedRational::Finite(ratio.recip() - Rational::one())
        }
    }

    /// `1/(1+w)`, with `1/(1+∞) = 0`.
    pub fn ratio_from_exponent(&self) -> Rational {
        match self {
            ExtendedRational::Infinity => Rational::zero(),
            ExtendedRational::Finite(w) => (w + Rational::one()).recip(),
        }
    }
}

impl From<Rational> for ExtendedRational {
    fn from(value: Rational) -> Self {
        ExtendedRational::Finite(value)
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => a.cmp(b),
            (ExtendedRational::Finite(_), ExtendedRational::Infinity) => Ordering::Less,
            (ExtendedRational::Infinity, ExtendedRational::Finite(_)) => Ordering::Greater,
            (ExtendedRational::Infinity, ExtendedRational::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(v) => f.write_str(&format_rational(v)),
            ExtendedRational::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = ParseRationalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let trimmed = text.trim();
        if matches!(trimmed, "inf" | "+inf" | "infinity" | "∞") {
            Ok(ExtendedRational::Infinity)
        } else {
            parse_rational(trimmed).map(ExtendedRational::Finite)
        }
    }
}

impl Serialize for ExtendedRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert_eq!(parse_rational("4/-8").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("+5/3").unwrap(), rat(5, 3));
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        assert!(matches!(
            parse_rational("0.5"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("1e3"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(parse_rational(""), Err(ParseRationalError::Empty)));
        assert!(parse_rational("/3").is_err());
    }

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_rational(&int(7)), "7/1");
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn infinity_orders_above_everything() {
        let big = ExtendedRational::Finite(int(1_000_000_000));
        assert!(ExtendedRational::Infinity > big);
        assert_eq!(
            ExtendedRational::Infinity.cmp(&ExtendedRational::Infinity),
            Ordering::Equal
        );
    }

    #[test]
    fn infinity_conventions() {
        assert_eq!(
            ExtendedRational::Infinity.ratio_from_exponent(),
            Rational::zero()
        );
        assert_eq!(
            ExtendedRational::exponent_from_ratio(&Rational::zero()),
            ExtendedRational::Infinity
        );
        assert_eq!(
            ExtendedRational::exponent_from_ratio(&rat(1, 6)),
            ExtendedRational::Finite(int(5))
        );
        assert_eq!(
            ExtendedRational::Infinity.recip(),
            ExtendedRational::Finite(Rational::zero())
        );
        assert_eq!(
            "inf".parse::<ExtendedRational>().unwrap(),
            ExtendedRational::Infinity
        );
    }

    #[test]
    fn extended_serde_round_trip() {
        let values = vec![
            ExtendedRational::Finite(rat(2, 5)),
            ExtendedRational::Infinity,
        ];
        let json = serde_json::to_string(&values).unwrap();
        assert_eq!(json, r#"["2/5","inf"]"#);
        let back: Vec<ExtendedRational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, values);
    }
}
