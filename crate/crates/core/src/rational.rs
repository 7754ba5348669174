//! Exact rational helpers shared by the file formats.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Parses `"p/q"` or `"p"` with arbitrary-precision integers.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"p/q"` (or `"p"`) strings.
pub fn rational_strings(values: &[BigRational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}
