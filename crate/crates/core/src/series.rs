//! Infinite binomial series for `rho_k^n`, for the generating sum
//! `sum_l binom((k+1)l + a, l) 2^(-(k+1)l)` and for `As_n^(k)`, evaluated as
//! exact partial sums with tail bounds.
//!
//! Consecutive terms of all three series have ratios tending to
//! `r_k = (k+1)^(k+1) / (k^k 2^(k+1)) < 1`. Tail bounds use the threshold
//! `theta_k = (1 + r_k) / 2`: once the terms have settled into one sign and
//! `|t_M| <= theta_k |t_{M-1}|`, the remainder after `t_M` is bounded by the
//! geometric series `|t_M| theta_k / (1 - theta_k)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::binomial::binom;
use crate::certified::CertifiedReal;
use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::root::{self, pow2};
use crate::sequence::KIndex;

/// Upper limit on the number of terms the adaptive driver will use.
pub const MAX_TERMS: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    /// `rho_k^n = 2^n - n 2^(n-k-1) sum_l binom(k(l+1) + l - n, l) / ((l+1) 2^((k+1)l))`, `n >= 1`.
    RhoPower { n: u64 },
    /// `sum_l binom((k+1)l + a, l) 2^(-(k+1)l) = 2^(a+1) rho_k^(-a) / ((k+1) rho_k - 2k)`.
    Hermite { a: i64 },
    /// `As_n^(k) = 2^(n-2) sum_l [binom((k+1)l - n, l) - binom((k+1)l - n, l-1)] 2^(-(k+1)l)`, `n != 1`.
    Asymptotic { n: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPartialSum {
    pub terms_used: usize,
    /// Exact sum of the first `terms_used` terms (plus the `2^n` offset for
    /// [`Series::RhoPower`]).
    pub value: BigRational,
    pub tail_bound: BigRational,
}

impl SeriesPartialSum {
    /// The value as a dyadic rational, when its denominator is a power of two.
    pub fn value_dyadic(&self) -> Option<DyadicRational> {
        let den = self.value.denom();
        let e = den.trailing_zeros().unwrap_or(0);
        (*den == BigInt::one() << e).then(|| DyadicRational::new(self.value.numer().clone(), e))
    }

    pub fn to_certified(&self) -> CertifiedReal {
        CertifiedReal::new(self.value.clone(), self.tail_bound.clone())
    }
}

/// `r_k = (k+1)^(k+1) / (k^k 2^(k+1))`.
pub fn limiting_ratio(k: KIndex) -> BigRational {
    let kk = k.get() as usize;
    let num = num_traits::pow(BigInt::from(kk + 1), kk + 1);
    let den = num_traits::pow(BigInt::from(kk), kk) << (kk + 1);
    BigRational::new(num, den)
}

/// `theta_k = (1 + r_k) / 2`.
pub fn ratio_threshold(k: KIndex) -> BigRational {
    (BigRational::one() + limiting_ratio(k)) / BigRational::from_integer(BigInt::from(2))
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl Series {
    fn validate(&self) -> Result<()> {
        match *self {
            Series::RhoPower { n: 0 } => Err(Error::IndexTooSmall { n: 0, min: 1 }),
            Series::Asymptotic { n: 1 } => Err(Error::SeriesExcludedIndex),
            _ => Ok(()),
        }
    }

    fn offset(&self) -> BigRational {
        match *self {
            Series::RhoPower { n } => pow2(n as i64),
            _ => BigRational::zero(),
        }
    }

    /// Term `l`, prefactors included.
    pub fn term(&self, k: KIndex, l: u64) -> BigRational {
        let kk = k.as_i64();
        let l = l as i64;
        let shift = (kk + 1) * l;
        match *self {
            Series::RhoPower { n } => {
                let n = n as i64;
                let c = binom(kk * (l + 1) + l - n, l) * BigInt::from(n);
                // -n 2^(n-k-1) c / ((l+1) 2^shift)
                let e = n - kk - 1 - shift;
                let (num, den) = scaled(-c, e);
                BigRational::new(num, den * BigInt::from(l + 1))
            }
            Series::Hermite { a } => {
                let (num, den) = scaled(binom(shift + a, l), -shift);
                BigRational::new(num, den)
            }
            Series::Asymptotic { n } => {
                let n = n as i64;
                let m = shift - n;
                let (num, den) = scaled(binom(m, l) - binom(m, l - 1), n - 2 - shift);
                BigRational::new(num, den)
            }
        }
    }

    /// First index from which every term has one sign and a ratio close to
    /// its limit can be trusted.
    pub fn stabilization_index(&self, k: KIndex) -> u64 {
        let kk = k.as_i64();
        let first_regular = match *self {
            // upper entry k(l+1) + l - n >= l
            Series::RhoPower { n } => ceil_div(n as i64 - kk, kk),
            // upper entry (k+1)l + a >= l
            Series::Hermite { a } => ceil_div(-a, kk),
            // (k+1)l - n >= 2l makes the difference of binomials positive
            Series::Asymptotic { n } => ceil_div(n as i64, kk - 1),
        };
        first_regular.max(0) as u64 + 1
    }

    /// Exact limit computed from the dominant root at `bits` of precision.
    pub fn reference_limit(&self, k: KIndex, bits: u32) -> Result<CertifiedReal> {
        match *self {
            Series::RhoPower { n } => root::rho(k, bits)?.powi(n as i64),
            Series::Hermite { a } => hermite_closed_form(k, a, bits),
            Series::Asymptotic { n } => root::asymptotic(k, n, bits),
        }
    }
}

/// `c * 2^e` as a numerator/denominator pair.
fn scaled(c: BigInt, e: i64) -> (BigInt, BigInt) {
    if e >= 0 {
        (c << e as u64, BigInt::one())
    } else {
        (c, BigInt::one() << e.unsigned_abs())
    }
}

/// Lazily extended list of terms and prefix sums.
struct Terms {
    series: Series,
    k: KIndex,
    terms: Vec<BigRational>,
    prefix: Vec<BigRational>,
}

impl Terms {
    fn new(series: Series, k: KIndex) -> Self {
        Terms {
            series,
            k,
            terms: Vec::new(),
            prefix: vec![series.offset()],
        }
    }

    fn get(&mut self, l: usize) -> &BigRational {
        while self.terms.len() <= l {
            let t = self.series.term(self.k, self.terms.len() as u64);
            let s = self.prefix.last().expect("prefix starts non-empty") + &t;
            self.terms.push(t);
            self.prefix.push(s);
        }
        &self.terms[l]
    }

    fn partial(&mut self, count: usize) -> SeriesPartialSum {
        if count > 0 {
            self.get(count - 1);
        }
        let value = self.prefix[count].clone();
        let tail_bound = self.tail_bound(count);
        SeriesPartialSum {
            terms_used: count,
            value,
            tail_bound,
        }
    }

    /// Bound on `|sum_{j >= count} t_j|`.
    fn tail_bound(&mut self, count: usize) -> BigRational {
        let theta = ratio_threshold(self.k);
        let stab = self.series.stabilization_index(self.k) as usize;
        let mut m = count.saturating_sub(1).max(stab).max(1);
        loop {
            let prev = self.get(m - 1).abs();
            let cur = self.get(m).abs();
            if !prev.is_zero() && cur <= &theta * &prev {
                break;
            }
            m += 1;
        }
        let skipped: BigRational = (count..=m).map(|j| self.terms[j].abs()).sum();
        let last = self.terms[m].abs();
        skipped + last * &theta / (BigRational::one() - &theta)
    }
}

/// The first `terms` terms of `series`, exactly.
pub fn terms(series: Series, k: KIndex, count: usize) -> Result<Vec<BigRational>> {
    series.validate()?;
    Ok((0..count as u64).map(|l| series.term(k, l)).collect())
}

/// Sum of the first `terms` terms with its tail bound.
pub fn partial_sum(series: Series, k: KIndex, terms: usize) -> Result<SeriesPartialSum> {
    series.validate()?;
    Ok(Terms::new(series, k).partial(terms))
}

/// Doubles the number of terms (4, 8, 16, ...) until the tail bound is at most `tol`.
pub fn adaptive(series: Series, k: KIndex, tol: &BigRational) -> Result<SeriesPartialSum> {
    series.validate()?;
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    let mut cache = Terms::new(series, k);
    let mut count = 4;
    loop {
        let p = cache.partial(count);
        if p.tail_bound <= *tol {
            return Ok(p);
        }
        if count >= MAX_TERMS {
            return Err(Error::Inconsistency(format!(
                "series did not reach tolerance within {MAX_TERMS} terms"
            )));
        }
        count *= 2;
    }
}

/// Partial sum of the series for `rho_k^n` (`n >= 1`).
pub fn thm1_partial(k: KIndex, n: u64, terms: usize) -> Result<SeriesPartialSum> {
    partial_sum(Series::RhoPower { n }, k, terms)
}

/// Partial sum of `sum_l binom((k+1)l + a, l) 2^(-(k+1)l)`.
pub fn hermite_sum_partial(k: KIndex, a: i64, terms: usize) -> Result<SeriesPartialSum> {
    partial_sum(Series::Hermite { a }, k, terms)
}

/// Partial sum of the series for `As_n^(k)` (`n != 1`).
pub fn thm3_partial(k: KIndex, n: u64, terms: usize) -> Result<SeriesPartialSum> {
    partial_sum(Series::Asymptotic { n }, k, terms)
}

/// `rho_k^n` from its series, with error equal to the tail bound (`<= tol`).
pub fn rho_power_via_series(k: KIndex, n: u64, tol: &BigRational) -> Result<CertifiedReal> {
    adaptive(Series::RhoPower { n }, k, tol).map(|p| p.to_certified())
}

/// `2^(a+1) rho_k^(-a) / ((k+1) rho_k - 2k)` from the dominant root at `bits`.
pub fn hermite_closed_form(k: KIndex, a: i64, bits: u32) -> Result<CertifiedReal> {
    let rho = root::rho(k, bits)?;
    let kk = BigInt::from(k.get());
    let den = rho
        .scale(&BigRational::from_integer(&kk + 1))
        .add_rational(&-BigRational::from_integer(2 * kk));
    rho.powi(-a)?.div(&den).map(|v| v.scale(&pow2(a + 1)))
}
