//! Helpers for exact fractions and their `"num/den"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

/// Always renders `num/den`, including integers (`0/1`, `1/1`).
pub fn to_string(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn in_unit_interval(v: &Q) -> bool {
    !v.is_negative() && *v <= Q::one()
}

/// Fixed 6-decimal rendering for presentation (SVG only).
pub fn to_fixed6(v: &Q) -> String {
    let scaled = (v * qi(1_000_000)).round();
    let n = scaled.to_integer();
    let neg = n < BigInt::zero();
    let abs = if neg { -n } else { n };
    let int = &abs / BigInt::from(1_000_000);
    let rem = &abs % BigInt::from(1_000_000);
    format!(
        "{}{}.{:0>6}",
        if neg { "-" } else { "" },
        int,
        rem.to_string()
    )
}
