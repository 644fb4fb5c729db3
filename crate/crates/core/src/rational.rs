// SPDX-License-Identifier: Apache-2.0

//! Exact rational helpers: the `"p/q"` text form used in JSON documents and
//! exact square roots of squared lengths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"p/q"` or `"p"` with optional sign. Decimal points and exponents
/// are rejected so that coordinates never pass through a float.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) || den.starts_with('-') {
        return Err(bad());
    }
    let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let den: BigInt = den.trim_start_matches('+').parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (reduced, q > 0).
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Square root of a nonnegative rational when it is itself rational.
pub fn exact_sqrt(value: &BigRational) -> Option<BigRational> {
    if value.is_negative() {
        return None;
    }
    let n = value.numer().sqrt();
    let d = value.denom().sqrt();
    (&n * &n == *value.numer() && &d * &d == *value.denom()).then(|| BigRational::new(n, d))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

pub(crate) mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(
            parse_rational("3/6").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(
            format_rational(&parse_rational("10/-5".replace("-", "").as_str()).unwrap()),
            "2"
        );
        assert_eq!(format_rational(&parse_rational("-1/3").unwrap()), "-1/3");
    }

    #[test]
    fn rejects_floats() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/-2").is_err());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_sqrt(&int(25)), Some(int(5)));
        assert_eq!(
            exact_sqrt(&parse_rational("9/4").unwrap()),
            parse_rational("3/2").ok()
        );
        assert_eq!(exact_sqrt(&int(2)), None);
        assert_eq!(exact_sqrt(&int(0)), Some(int(0)));
    }
}
