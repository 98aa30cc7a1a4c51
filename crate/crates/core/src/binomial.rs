//! Generalized binomial coefficients over all integer pairs.
//!
//! For `b >= 0` the value is the falling factorial `a (a-1) ... (a-b+1) / b!`;
//! for `b < 0 <= a - b` it is `binom(a, a - b)`; otherwise (`a < b < 0`)
//! it is zero. With this extension Pascal's rule holds everywhere except
//! at `(0, 0)`, and the upper index reflects as
//! `binom(a, b) = ±binom(b - a - 1, b)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Generalized binomial coefficient `binom(a, b)` for any integers.
pub fn binom(a: i64, b: i64) -> BigInt {
    if b >= 0 {
        falling_quotient(a, b as u64)
    } else if a >= b {
        // a - b >= 0 here, so the rewrite lands in the first case.
        falling_quotient(a, (a - b) as u64)
    } else {
        BigInt::zero()
    }
}

/// `a (a-1) ... (a-b+1) / b!`, dividing once at the end.
fn falling_quotient(a: i64, b: u64) -> BigInt {
    if a >= 0 && (a as u64) < b {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..b {
        num *= BigInt::from(a) - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(r.is_zero(), "falling factorial not divisible by b!");
    q
}
