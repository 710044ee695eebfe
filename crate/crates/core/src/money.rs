//! Exact monetary amounts.
//!
//! Every quantity in the engine is a [`Money`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

pub type Money = BigRational;

/// Error returned when an amount string cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse amount {0:?}")]
pub struct ParseMoneyError(pub String);

pub fn int(n: i64) -> Money {
    Money::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Money {
    Money::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Money {
    Money::zero()
}

pub fn one() -> Money {
    Money::one()
}

/// Parses `"3"`, `"-1.25"`, `"2/3"` or `"-7/4"` into an exact rational.
pub fn parse(s: &str) -> Result<Money, ParseMoneyError> {
    let err = || ParseMoneyError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Money::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    let digits = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if !digits(whole) || !digits(frac) {
        return Err(err());
    }
    let mut numer = BigInt::zero();
    for c in whole.chars().chain(frac.chars()) {
        numer = numer * 10 + (c as u8 - b'0');
    }
    let denom = num::pow(BigInt::from(10), frac.len());
    let v = Money::new(numer, denom);
    Ok(if neg { -v } else { v })
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn fmt(m: &Money) -> String {
    if m.denom().is_one() {
        m.numer().to_string()
    } else {
        format!("{}/{}", m.numer(), m.denom())
    }
}

pub fn positive_part(m: &Money) -> Money {
    if m.is_negative() {
        Money::zero()
    } else {
        m.clone()
    }
}

pub fn in_unit_interval(m: &Money) -> bool {
    !m.is_negative() && *m <= Money::one()
}

pub fn sum<'a, I: IntoIterator<Item = &'a Money>>(it: I) -> Money {
    it.into_iter().fold(Money::zero(), |acc, x| acc + x)
}

/// Serde adapter storing a [`Money`] as its canonical string.
pub mod serde_str {
    use super::Money;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Money, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt(m))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Money, D::Error> {
        let raw = AmountRepr::deserialize(d)?;
        match raw {
            AmountRepr::Text(t) => super::parse(&t).map_err(serde::de::Error::custom),
            AmountRepr::Int(i) => Ok(super::int(i)),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum AmountRepr {
        Text(String),
        Int(i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("2").unwrap(), int(2));
        assert_eq!(parse("1.5").unwrap(), ratio(3, 2));
        assert_eq!(parse("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse("-7/4").unwrap(), ratio(-7, 4));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert!(parse("").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.2.3").is_err());
        assert!(parse("-").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(fmt(&ratio(4, 6)), "2/3");
        assert_eq!(fmt(&ratio(6, 3)), "2");
        assert_eq!(fmt(&ratio(1, -2)), "-1/2");
        assert_eq!(fmt(&zero()), "0");
    }

    #[test]
    fn roundtrip() {
        for s in ["0", "5", "-3", "1/7", "-22/7"] {
            assert_eq!(fmt(&parse(s).unwrap()), s);
        }
    }
}
