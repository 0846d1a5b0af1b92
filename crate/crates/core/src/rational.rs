//! Exact rationals and the handful of helpers the rest of the crate needs.

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn int(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn floor(x: Q) -> i64 {
    num_integer::Integer::div_floor(x.numer(), x.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - int(floor(x))
}

/// True when `r * x` is an integer.
pub fn has_denominator_dividing(x: Q, r: u32) -> bool {
    (x * int(r as i64)).is_integer()
}

/// Formats as `p/q` in lowest terms with `q > 0`, or `p` when integral.
pub fn format(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Formats as `p/q` always, the wire form for JSON documents.
pub fn format_strict(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `a/b` or an integer. Decimal notation is rejected.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected a rational `a/b`, got `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(n, d))
}

/// Nearest rational with denominator `den`, if within `tol` of `x`.
pub fn reconstruct(x: f64, den: i64, tol: f64) -> Option<Q> {
    let scaled = (x * den as f64).round();
    let candidate = Q::new(scaled as i64, den);
    let approx = *candidate.numer() as f64 / *candidate.denom() as f64;
    ((approx - x).abs() < tol).then_some(candidate)
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_frac_of_negatives() {
        assert_eq!(floor(q(-1, 2)), -1);
        assert_eq!(floor(q(-2, 2)), -1);
        assert_eq!(frac(q(-1, 3)), q(2, 3));
        assert_eq!(frac(int(4)), int(0));
    }

    #[test]
    fn parse_rejects_decimals() {
        assert_eq!(parse("1/2").unwrap(), q(1, 2));
        assert_eq!(parse(" -3 ").unwrap(), int(-3));
        assert!(parse("0.5").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format(q(2, 4)), "1/2");
        assert_eq!(format(q(-3, 6)), "-1/2");
        assert_eq!(format(int(5)), "5");
        assert_eq!(format_strict(int(5)), "5/1");
    }

    #[test]
    fn reconstruction_respects_tolerance() {
        assert_eq!(reconstruct(0.5 + 1e-12, 4, 1e-9), Some(q(1, 2)));
        assert_eq!(reconstruct(0.5 + 1e-6, 4, 1e-9), None);
    }
}
