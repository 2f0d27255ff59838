//! Exact rational numbers and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Whitespace around the parts is ignored.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

/// Rounds to 12 significant digits for floating summaries in reports.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::format(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| super::parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("1/2").unwrap(), half());
        assert_eq!(parse(" 4/8 ").unwrap(), half());
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-2/6").unwrap(), ratio(-1, 3));
        assert_eq!(format(&ratio(6, 4)), "3/2");
        assert_eq!(format(&int(7)), "7");
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn round12_keeps_twelve_digits() {
        assert_eq!(round12(2.0 / 3.0), 0.666666666667);
        assert_eq!(round12(0.0), 0.0);
    }
}
