use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub type RVector = Vec<Rational>;

/// Shorthand for `numer/denom` as a [`Rational`]. Panics if `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or `"p"`. Surrounding whitespace is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    if s.is_empty() || s.trim() != s || s.contains(' ') {
        return Err(Error::input(format!("malformed rational {s:?}")));
    }
    if let Some((_, den)) = s.split_once('/') {
        if den.starts_with('-') || den.starts_with('+') {
            return Err(Error::input(format!("malformed rational {s:?}")));
        }
    }
    let r = Rational::from_str(s).map_err(|_| Error::input(format!("malformed rational {s:?}")))?;
    Ok(r)
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses a comma-separated list such as `"1/4, 1/3, 0"`; spaces around commas are ignored.
pub fn parse_vector(s: &str) -> Result<RVector> {
    s.split(',').map(|c| parse_rational(c.trim())).collect()
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub mod vec_ops {
    use num_traits::Zero;

    use super::{RVector, Rational};

    pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = Rational::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        acc
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> RVector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> RVector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(a: &[Rational], s: &Rational) -> RVector {
        a.iter().map(|x| x * s).collect()
    }

    pub fn zeros(n: usize) -> RVector {
        vec![Rational::zero(); n]
    }

    /// Arithmetic mean of a nonempty set of points.
    pub fn centroid<'a>(points: impl IntoIterator<Item = &'a RVector>) -> RVector {
        let mut iter = points.into_iter();
        let first = iter.next().expect("centroid of empty set");
        let mut sum = first.clone();
        let mut count = 1i64;
        for p in iter {
            for (s, x) in sum.iter_mut().zip(p) {
                *s += x;
            }
            count += 1;
        }
        let inv = Rational::new(1.into(), count.into());
        scale(&sum, &inv)
    }

    pub fn to_f64(a: &[Rational]) -> Vec<f64> {
        use num_traits::ToPrimitive;
        a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
        assert!(parse_rational("3/-4").is_err());
        assert_eq!(format_rational(&rat(0, 5)), "0");
        assert!(parse_rational(" 1/2").is_err());
        assert!(parse_rational("1 /2").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn vectors_parse_from_comma_lists() {
        let v = parse_vector("1/4,1/3,0,-2").unwrap();
        assert_eq!(v, vec![rat(1, 4), rat(1, 3), rat(0, 1), rat(-2, 1)]);
        assert_eq!(format_vector(&v), vec!["1/4", "1/3", "0", "-2"]);
        assert!(parse_vector("1,,2").is_err());
    }
}
