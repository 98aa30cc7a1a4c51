//! Finite binomial-sum formulas for `F_n^(k)`.
//!
//! Every sum is accumulated exactly as a [`DyadicRational`]; the formulas
//! that must produce integers are checked for integrality at the end.
//! Real-valued summation ranges such as `l <= (n - 1) / (k + 1)` are read
//! as `l <= floor((n - 1) / (k + 1))`.

use num_bigint::BigInt;

use crate::binomial::binom;
use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::sequence::KIndex;

/// Largest `l` with `(k + 1) l <= top`, or `None` when `top < 0`.
fn range_end(top: i64, k: i64) -> Option<i64> {
    (top >= 0).then(|| top / (k + 1))
}

fn integral(value: DyadicRational, what: &str) -> Result<BigInt> {
    value
        .to_integer()
        .ok_or_else(|| Error::Inconsistency(format!("{what} evaluated to the non-integer {value}")))
}

/// `binom(m, l) - binom(m, l - 1)`.
fn ballot_difference(m: i64, l: i64) -> BigInt {
    binom(m, l) - binom(m, l - 1)
}

fn check_closed_form_domain(k: KIndex, n: i64) -> Result<()> {
    if n < k.as_i64() {
        Err(Error::BelowOrder { n, k: k.get() })
    } else {
        Ok(())
    }
}

/// The truncated sum `G_n^(k)`:
/// `2^(n-2) * sum_{0 <= l <= (n-1)/(k+1)} [binom((k+1)l - n, l) - binom((k+1)l - n, l - 1)] 2^(-(k+1)l)`,
/// which equals `F_{n+k-2}^(k)` for `n >= 2`.
pub fn gsum(k: KIndex, n: i64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::IndexTooSmall { n, min: 2 });
    }
    integral(gsum_dyadic(k, n), "G_n")
}

fn gsum_dyadic(k: KIndex, n: i64) -> DyadicRational {
    let k = k.as_i64();
    let mut acc = DyadicRational::zero();
    for l in 0..=range_end(n - 1, k).unwrap_or(-1) {
        let m = (k + 1) * l - n;
        acc += &DyadicRational::new(ballot_difference(m, l), ((k + 1) * l) as u64);
    }
    acc.mul_pow2(n - 2)
}

/// `F_n^(k)` for `n >= k` as
/// `2^(n-k) * sum_{0 <= l <= (n-k+1)/(k+1)} [binom((k+1)l - n + k - 2, l) - binom(..., l - 1)] 2^(-(k+1)l)`.
pub fn kfib_binomial(k: KIndex, n: i64) -> Result<BigInt> {
    check_closed_form_domain(k, n)?;
    let kk = k.as_i64();
    let mut acc = DyadicRational::zero();
    for l in 0..=range_end(n - kk + 1, kk).unwrap_or(-1) {
        let m = (kk + 1) * l - n + kk - 2;
        acc += &DyadicRational::new(ballot_difference(m, l), ((kk + 1) * l) as u64);
    }
    integral(acc.mul_pow2(n - kk), "binomial sum")
}

/// Classical Fibonacci numbers (`n >= 2`) as a finite sum over nonpositive powers of 8.
pub fn fib_binomial(n: i64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::IndexTooSmall { n, min: 2 });
    }
    let mut acc = DyadicRational::zero();
    for l in 0..=(n - 1) / 3 {
        acc += &DyadicRational::new(ballot_difference(3 * l - n, l), (3 * l) as u64);
    }
    integral(acc.mul_pow2(n - 2), "Fibonacci binomial sum")
}

/// Term `(-1)^l [binom(n-(l+1)k+2, l) - binom(n-(l+1)k, l-2)] 2^(n-(k+1)l-k)`.
fn ordinary_term(k: i64, n: i64, l: i64) -> DyadicRational {
    let c = binom(n - (l + 1) * k + 2, l) - binom(n - (l + 1) * k, l - 2);
    signed_scaled(c, l, n - (k + 1) * l - k)
}

/// Term `(-1)^l [binom(n-(l+1)k+1, l) + binom(n-(l+1)k, l-1)] 2^(n-(k+1)l-k)`.
fn ordinary_alt_term(k: i64, n: i64, l: i64) -> DyadicRational {
    let c = binom(n - (l + 1) * k + 1, l) + binom(n - (l + 1) * k, l - 1);
    signed_scaled(c, l, n - (k + 1) * l - k)
}

fn signed_scaled(c: BigInt, l: i64, e: i64) -> DyadicRational {
    let c = if l % 2 == 1 { -c } else { c };
    DyadicRational::from_integer(c).mul_pow2(e)
}

fn ordinary_sum(
    k: i64,
    n: i64,
    last: i64,
    term: fn(i64, i64, i64) -> DyadicRational,
) -> DyadicRational {
    let mut acc = DyadicRational::pow2(n - k);
    for l in 1..=last {
        acc += &term(k, n, l);
    }
    acc
}

/// `F_n^(k)` via the ordinary-binomial formula, valid for `n >= k`, `n != 2k - 1`.
pub fn kfib_ordinary(k: KIndex, n: i64) -> Result<BigInt> {
    check_closed_form_domain(k, n)?;
    let kk = k.as_i64();
    if n == 2 * kk - 1 {
        return Err(Error::ExcludedIndex { n, k: k.get() });
    }
    integral(kfib_ordinary_unchecked(k, n), "ordinary binomial sum")
}

/// The ordinary-binomial sum evaluated without the `n != 2k - 1` guard.
pub fn kfib_ordinary_unchecked(k: KIndex, n: i64) -> DyadicRational {
    let kk = k.as_i64();
    ordinary_sum(kk, n, (n - kk + 1).div_euclid(kk + 1), ordinary_term)
}

/// `F_n^(k)` via the alternative ordinary-binomial formula, valid for every `n >= k`.
pub fn kfib_ordinary_alt(k: KIndex, n: i64) -> Result<BigInt> {
    check_closed_form_domain(k, n)?;
    let kk = k.as_i64();
    let acc = ordinary_sum(kk, n, (n - kk + 1).div_euclid(kk + 1), ordinary_alt_term);
    integral(acc, "alternative ordinary binomial sum")
}

/// The ordinary-binomial sum taken over the too-long range
/// `1 <= l <= (n - 1) / (k + 1)`, as published in an earlier source.
///
/// The result is returned as an exact dyadic rational because it is not
/// always an integer: at `(k, n) = (5, 7)` it equals `4 + 1/16`.
pub fn kfib_howard_cooper_erroneous(k: KIndex, n: i64) -> Result<DyadicRational> {
    check_closed_form_domain(k, n)?;
    let kk = k.as_i64();
    Ok(ordinary_sum(
        kk,
        n,
        (n - 1).div_euclid(kk + 1),
        ordinary_term,
    ))
}
