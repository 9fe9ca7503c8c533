//! Exact rationals and the `"p/q"` string form used in serialized output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always normalized with positive denominator.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^k`
pub fn sign(k: usize) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn format_q(c: &Q) -> String {
    c.to_string()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim_start_matches('+')
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| {
        num_integer::Integer::lcm(&acc, v.denom())
    })
}

pub fn is_integral(c: &Q) -> bool {
    c.denom().is_one()
}

pub fn abs(c: &Q) -> Q {
    c.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_q(&qr(6, -4)), "-3/2");
        assert_eq!(format_q(&qr(4, 2)), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/2", "-3/2", "7", "0"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("+4/6").unwrap(), qr(2, 3));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }
}
