//! Exact rational coefficients and their canonical string form.
//!
//! All core algebra runs on arbitrary-precision rationals; floats only ever
//! appear in the numerical verification layer. Strings are the exchange
//! format: `"p/q"` with the fraction in lowest terms and a positive
//! denominator, or a bare integer string when the denominator is 1. Decimal
//! and exponent notation are rejected on parse so no precision is lost
//! silently.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always in lowest terms, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for small rational constants.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for integer constants.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Format as `"p"` or `"p/q"`, decimal-free.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p"` or `"p/q"`. Rejects floats (`"1.5"`, `"1e3"`), empty parts,
/// and zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Domain("empty rational literal".into()));
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::Domain(format!(
            "`{s}` looks like a float; couplings must be exact rationals like `3/2` or `2`"
        )));
    }
    let (numer_str, denom_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = numer_str
        .parse()
        .map_err(|_| Error::Domain(format!("invalid rational numerator in `{s}`")))?;
    let denom: BigInt = denom_str
        .parse()
        .map_err(|_| Error::Domain(format!("invalid rational denominator in `{s}`")))?;
    if denom.is_zero() {
        return Err(Error::Domain(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(numer, denom))
}

/// Nearest f64 (used only when handing values to the numerical layer).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a sign-correct infinity for out-of-range magnitudes.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
