//! Exact arithmetic helpers shared by every exact formula in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in reduced form with a
/// positive denominator.
pub type ExactScalar = BigRational;

pub fn int(v: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(num), BigInt::from(den))
}

/// Integer power with a signed exponent; `x^0 = 1` even for `x = 0`.
pub fn powi(x: &ExactScalar, e: i64) -> ExactScalar {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Catalan number `binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / (n + 1)
}

/// `(2n - 1)!!`, with `(-1)!! = 1`.
pub fn double_factorial_odd(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * (2 * k - 1))
}

pub fn to_f64(x: &ExactScalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Very large operands: fall back to a scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact integer square root test.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

/// Returns `(numerator, denominator)` as decimal strings.
pub fn to_parts(x: &ExactScalar) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

pub fn is_nonnegative(x: &ExactScalar) -> bool {
    !x.is_negative()
}

/// Parses `"a"`, `"a/b"` or a finite decimal like `"0.25"` into an exact value.
pub fn parse_exact(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(ExactScalar::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = ExactScalar::new(n, d);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(ExactScalar::from_integer)
}
