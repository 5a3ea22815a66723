//! Exact rational scalars and their text forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rising factorial `(x)_k`, with `(x)_0 = 1`.
pub fn pochhammer(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, j| acc * (x + Rational::from_integer(j.into())))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Canonical `p/q` form; integers keep their `/1`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q`, integers, decimals (`0.34`) and scientific notation (`5.0e-8`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_decimal(p.trim()).ok_or_else(err)?;
        let q = parse_decimal(q.trim()).ok_or_else(err)?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(p / q);
    }
    parse_decimal(t).ok_or_else(err)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let value: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut q = if scale >= 0 {
        Rational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Some(q)
}

/// Serde adapter for a single rational as a `p/q` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`; `None` becomes `null`.
pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for a sequence of rationals.
pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("7/2").unwrap(), rat(7, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.34").unwrap(), rat(17, 50));
        assert_eq!(parse_rational("5.0e-8").unwrap(), rat(1, 20_000_000));
        assert_eq!(parse_rational("5e-12").unwrap(), rat(1, 200_000_000_000));
        assert_eq!(parse_rational("1e3").unwrap(), int(1000));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1.5/3").unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1..2", "-", "e5", "2/x"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&rat(7, 2)), "7/2");
        assert_eq!(format_rational(&int(-3)), "-3/1");
        assert_eq!(format_rational(&rat(4, -8)), "-1/2");
    }
}
