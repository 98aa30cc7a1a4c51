//! Reference engines for the k-Fibonacci sequence.
//!
//! `F_0 = ... = F_{k-2} = 0`, `F_{k-1} = 1`, and every later term is the
//! sum of the `k` terms before it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default bound on `n` for the brute-force composition count.
pub const COMPOSITION_CAP: u64 = 25;

/// A validated sequence order `k >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KIndex(u32);

impl KIndex {
    pub fn new(k: i64) -> Result<Self> {
        if (2..=u32::MAX as i64).contains(&k) {
            Ok(KIndex(k as u32))
        } else {
            Err(Error::InvalidOrder(k))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub(crate) fn as_i64(self) -> i64 {
        self.0 as i64
    }
}

impl TryFrom<i64> for KIndex {
    type Error = Error;
    fn try_from(k: i64) -> Result<Self> {
        KIndex::new(k)
    }
}

impl fmt::Display for KIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `F_0^(k), ..., F_{n_max}^(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibTable {
    k: KIndex,
    values: Vec<BigInt>,
}

impl FibTable {
    pub fn k(&self) -> KIndex {
        self.k
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    /// Re-checks the initial segment and every recurrence window.
    pub fn check(&self) -> Result<()> {
        let k = self.k.get() as usize;
        for (i, v) in self.values.iter().enumerate().take(k) {
            let expected = if i == k - 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            if *v != expected {
                return Err(Error::Inconsistency(format!("initial value F_{i} = {v}")));
            }
        }
        for w in self.values.windows(k + 1) {
            let s: BigInt = w[..k].iter().sum();
            if s != w[k] {
                return Err(Error::Inconsistency(format!(
                    "window ending in {} breaks the recurrence",
                    w[k]
                )));
            }
        }
        Ok(())
    }
}

/// `F_0 ... F_{n_max}` by summing the previous `k` entries.
pub fn kfib_table(k: KIndex, n_max: usize) -> FibTable {
    let kk = k.get() as usize;
    let mut values = Vec::with_capacity(n_max + 1);
    for i in 0..=n_max {
        let v = if i + 1 < kk {
            BigInt::zero()
        } else if i + 1 == kk {
            BigInt::one()
        } else {
            values[i - kk..i].iter().sum()
        };
        values.push(v);
    }
    FibTable { k, values }
}

/// `F_n^(k)` from the order-k recurrence.
pub fn kfib_order_k(k: KIndex, n: usize) -> BigInt {
    kfib_table(k, n)
        .values
        .pop()
        .expect("table has n + 1 entries")
}

/// `F_n^(k)` from `F_{m+k+1} = 2 F_{m+k} - F_m`, seeded with `F_0 ... F_k`.
pub fn kfib_order_k1(k: KIndex, n: usize) -> BigInt {
    let kk = k.get() as usize;
    // F_{k-1} = 1 and F_k = F_0 + ... + F_{k-1} = 1.
    let mut values: Vec<BigInt> = (0..=kk)
        .map(|i| {
            if i + 1 >= kk {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    while values.len() <= n {
        let m = values.len();
        let next = 2 * &values[m - 1] - &values[m - kk - 1];
        values.push(next);
    }
    values.swap_remove(n)
}

/// Number of ordered ways to write `n` as a sum of parts from `{1, ..., k}`,
/// found by walking every such tuple. Refuses `n` above [`COMPOSITION_CAP`].
pub fn count_compositions(k: KIndex, n: u64) -> Result<BigInt> {
    count_compositions_capped(k, n, COMPOSITION_CAP)
}

pub fn count_compositions_capped(k: KIndex, n: u64, cap: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::IndexTooSmall { n: 0, min: 1 });
    }
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let mut tuple = Vec::with_capacity(n as usize);
    let mut count = 0u64;
    extend_tuple(k.get() as u64, n, 0, &mut tuple, &mut count);
    Ok(BigInt::from(count))
}

fn extend_tuple(k: u64, n: u64, sum: u64, tuple: &mut Vec<u64>, count: &mut u64) {
    if sum == n {
        debug_assert_eq!(tuple.iter().sum::<u64>(), n);
        *count += 1;
        return;
    }
    for part in 1..=k.min(n - sum) {
        tuple.push(part);
        extend_tuple(k, n, sum + part, tuple, count);
        tuple.pop();
    }
}
