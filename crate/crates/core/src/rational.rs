//! Exact rational arithmetic helpers.
//!
//! All verifiers in this crate decide constraints exactly over arbitrary-precision
//! rationals; nothing numeric is ever compared through floats.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// The number type used by every verifier and reduction.
pub type Rational = BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `-p`, or `p/q` (q > 0 after normalization).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator: {s:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator: {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational: {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// Formats as `p` when integral, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer `k` with `k <= r`.
pub fn floor_int(r: &Rational) -> i64 {
    r.floor().numer().to_i64().expect("floor out of i64 range")
}

/// Smallest integer `k` with `k >= r`.
pub fn ceil_int(r: &Rational) -> i64 {
    r.ceil().numer().to_i64().expect("ceil out of i64 range")
}

/// Best-effort conversion to `f64` (used only by the relaxation heuristic).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let scale = BigInt::from(1u64 << 53);
        let scaled = (r * Rational::from_integer(scale.clone())).round();
        scaled.numer().to_f64().unwrap_or(0.0) / scale.to_f64().unwrap()
    })
}

/// `|a - b|`.
pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}
