//! Exact arithmetic primitives: arbitrary-precision rationals and floor
//! integer roots. Nothing in this crate's core logic goes through floating
//! point; the one float below is only a seed that is corrected by exact
//! integer comparison.

pub use num::BigInt;
pub use num::BigRational as Rational;
use num::{One, Zero};

/// Canonical rational num/den (reduced, positive denominator).
///
/// Panics if `den == 0`.
pub fn ratio(num: u64, den: u64) -> Rational {
    assert!(den != 0, "ratio: zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The reciprocal 1/n. Panics if `n == 0`.
pub fn unit_fraction(n: u64) -> Rational {
    ratio(1, n)
}

/// The rational value of `n`.
pub fn integer(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Floor of the e-th root of n.
///
/// A floating-point seed is stepped down while seed^e > n and up while
/// (seed+1)^e <= n, with both tests done in exact integer arithmetic, so the
/// result is correct regardless of how the seed rounded.
///
/// Panics if `n == 0` or `e == 0`.
pub fn integer_root(n: u64, e: u32) -> u64 {
    assert!(n > 0, "integer_root: n must be positive");
    assert!(e > 0, "integer_root: e must be positive");
    if e == 1 {
        return n;
    }
    if e >= 64 {
        // 2^e > u64::MAX >= n, so the root is 1.
        return 1;
    }
    let mut r = (n as f64).powf(1.0 / f64::from(e)).round() as u64;
    while r > 0 && pow_exceeds(r, e, n) {
        r -= 1;
    }
    while !pow_exceeds(r + 1, e, n) {
        r += 1;
    }
    r
}

/// Exact test for base^e > n. Never overflows: the accumulator stays below
/// 2^128 because it is at most n < 2^64 before each multiply.
fn pow_exceeds(base: u64, e: u32, n: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= u128::from(base);
        if acc > u128::from(n) {
            return true;
        }
    }
    false
}
