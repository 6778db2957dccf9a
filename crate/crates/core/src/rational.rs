//! Exact rational helpers. Weights and payoffs are `BigRational` end to end
//! and serialized as `"p/q"` strings in lowest terms.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: u128) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format(r: &Rational) -> String {
    // `Ratio` is always kept reduced with a positive denominator.
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Checks `0 < eps < 1`.
pub fn check_open_unit(name: &str, r: &Rational) -> Result<()> {
    if !r.is_positive() || *r >= Rational::one() {
        return Err(Error::InvalidParams(format!(
            "{name} must lie strictly between 0 and 1, got {}",
            format(r)
        )));
    }
    Ok(())
}

pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_lowest_terms() {
        assert_eq!(format(&parse("6/8").unwrap()), "3/4");
        assert_eq!(format(&parse("4/2").unwrap()), "2");
        assert_eq!(format(&parse("-1/3").unwrap()), "-1/3");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn open_unit_interval() {
        assert!(check_open_unit("eps", &ratio(1, 2)).is_ok());
        assert!(check_open_unit("eps", &ratio(0, 1)).is_err());
        assert!(check_open_unit("eps", &ratio(1, 1)).is_err());
    }
}
