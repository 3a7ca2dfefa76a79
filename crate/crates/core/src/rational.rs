//! Exact rationals and their textual form.
//!
//! Rationals cross every external boundary as `"p/q"` strings (or `"p"` when
//! the denominator is one), never as floats.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(token: &str) -> Result<Q> {
    let t = token.trim();
    let err = || Error::ParseRational(token.to_string());
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Q::new(num, den))
}

/// Parses a comma separated list of rationals, e.g. `"1/2,-1/3,2"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse integer `{t}`")))
        })
        .collect()
}

/// Parses a complex rational token: `a`, `bi`, `a+bi` or `a-bi`, with `a`, `b`
/// rationals in `p/q` form. A bare `i` stands for one.
pub fn parse_complex(token: &str) -> Result<(Q, Q)> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::ParseRational(token.to_string());
    let Some(body) = t.strip_suffix('i') else {
        return Ok((parse_rational(&t)?, Q::zero()));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s.strip_prefix('+').unwrap_or(s),
    };
    if im.is_empty() {
        return Err(err());
    }
    Ok((parse_rational(re).map_err(|_| err())?, parse_rational(im).map_err(|_| err())?))
}

pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_complex(re: &Q, im: &Q) -> String {
    if im.is_zero() {
        return format_rational(re);
    }
    let mut s = String::new();
    if !re.is_zero() {
        s.push_str(&format_rational(re));
        if im.is_positive() {
            s.push('+');
        }
    }
    let _ = write!(s, "{}i", format_rational(im));
    s
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn dot_int(a: &[Q], b: &[i64]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, &y)| acc + x * Q::from_integer(BigInt::from(y)))
}

/// Serde adapter for `Vec<Q>` as a list of `"p/q"` strings.
pub mod serde_vec {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Q};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|t| parse_rational(t).map_err(D::Error::custom)).collect()
    }
}

/// Serde adapter for a single `Q`.
pub mod serde_one {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Q};

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(D::Error::custom)
    }
}
