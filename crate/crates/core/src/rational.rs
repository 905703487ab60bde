//! Exact rational scalars and the shared literal format.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! canonical form (positive denominator, gcd-reduced) after each operation —
//! exactly the invariant the toolkit relies on. This module adds the literal
//! format used in files and on the CLI ("p/q", or "p" when q = 1), integer
//! square-root helpers for exact interval bounds, and bit-size accounting.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parse a rational literal: "p/q" or "p", q > 0 after normalization.
/// Non-canonical input ("4/6", "1/-2") is accepted and normalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    s.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational literal {s:?}: {e}")))
}

/// Canonical literal form; inverse of `parse_rational` on canonical values.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn rational_from_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Nearest integer, exact half-integers rounded toward minus infinity.
/// This is the single rounding rule used throughout the toolkit.
pub fn round_half_down(x: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    (x - half).ceil().to_integer()
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

/// Largest integer k with k^2 <= x (x a nonnegative rational).
pub fn floor_sqrt(x: &Rational) -> BigInt {
    assert!(!x.is_negative());
    // floor(sqrt(p/q)) = floor(sqrt(floor(p/q))) can undershoot; use
    // isqrt(p*q)/q instead: isqrt(p*q) = floor(sqrt(p*q)) and
    // floor(sqrt(p/q)) = floor(isqrt(p*q)/q).
    let pq = x.numer() * x.denom();
    let r = isqrt(&pq);
    r.div_floor(x.denom())
}

/// A rational r with sqrt(x) <= r <= 2*sqrt(x) for x >= 0 (r = 0 iff x = 0).
/// Used where an exact length is irrational but a modest upper bound is
/// enough.
pub fn sqrt_upper_bound(x: &Rational) -> Rational {
    assert!(!x.is_negative());
    if x.is_zero() {
        return Rational::zero();
    }
    // (isqrt(p*q)+1)/q >= sqrt(p/q), and the overshoot is < 1/q <= sqrt(p/q)
    // whenever p*q >= 1, which holds for every positive rational.
    let pq = x.numer() * x.denom();
    Rational::new(isqrt(&pq) + BigInt::one(), x.denom().clone())
}

/// A rational r with r <= sqrt(x) and sqrt(x) - r < 2^-32, for x >= 0.
pub fn sqrt_lower_bound(x: &Rational) -> Rational {
    assert!(!x.is_negative());
    if x.is_zero() {
        return Rational::zero();
    }
    let scale = BigInt::one() << 64u32; // 4^32
    let scaled = (x * Rational::from_integer(scale)).floor().to_integer();
    Rational::new(isqrt(&scaled), BigInt::one() << 32u32)
}

/// Extended gcd: returns (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let tmp = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, tmp);
        let tmp = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, tmp);
        let tmp = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, tmp);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// gcd >= 0 of a slice; 0 for an all-zero slice.
pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Bit length of the magnitude of an integer (0 for zero).
pub fn int_bits(n: &BigInt) -> u64 {
    n.bits()
}

/// Max bit length over numerator and denominator.
pub fn rational_bits(x: &Rational) -> u64 {
    int_bits(x.numer()).max(int_bits(x.denom()))
}

/// True iff n is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt(n);
    &r * &r == *n
}

/// Exact square root of a rational, if one exists.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let pn = isqrt(x.numer());
    let pd = isqrt(x.denom());
    if &pn * &pn == *x.numer() && &pd * &pd == *x.denom() {
        Some(Rational::new(pn, pd))
    } else {
        None
    }
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Smallest integer e >= 0 with 4^e >= n, i.e. ceil(log2(sqrt(n))) for n >= 1.
pub fn ceil_log2_sqrt(n: &BigInt) -> u64 {
    assert!(n.sign() == Sign::Plus, "requires a positive integer");
    let mut e = 0u64;
    let mut pow = BigInt::one();
    let four = BigInt::from(4);
    while pow < *n {
        pow *= &four;
        e += 1;
    }
    e
}
