//! Exact rational scalars and their textual form (`"-3/2"`, `"7"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `p` or `p/q` with optional sign on `p`; the denominator must be positive.
pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError { input: s.to_string(), reason };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    match t.split_once('/') {
        None => parse_int(t).map(Q::from_integer).ok_or_else(|| err("not an integer")),
        Some((num, den)) => {
            let n = parse_int(num).ok_or_else(|| err("bad numerator"))?;
            if den.starts_with('-') || den.starts_with('+') {
                return Err(err("signed denominator"));
            }
            let d = parse_int(den).ok_or_else(|| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Canonical text: reduced, sign on the numerator, no denominator when integral.
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

/// Returns `Some(r)` with `r * r == x` when `x` is the square of a rational.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &n * &n == *x.numer() && &d * &d == *x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        assert_eq!(parse_rational("-3/2").unwrap(), qf(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), q(2));
        assert_eq!(format_rational(&qf(6, -4)), "-3/2");
        assert_eq!(format_rational(&q(0)), "0");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1/-2", "--1", "1/2/3", "/3", "3/"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&qf(9, 4)), Some(qf(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
        assert_eq!(rational_sqrt(&q(-1)), None);
    }
}
