//! Rational approximations with rigorous absolute error bounds.
//!
//! A [`CertifiedReal`] stands for every real `x` with `|x - approx| <= err`.
//! Arithmetic propagates the bound exactly in rationals; [`CertifiedReal::compact`]
//! trims the representation and rounds the bound outward.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    approx: BigRational,
    err: BigRational,
}

impl CertifiedReal {
    /// Panics if `err` is negative.
    pub fn new(approx: BigRational, err: BigRational) -> Self {
        assert!(!err.is_negative(), "error bound must be nonnegative");
        CertifiedReal { approx, err }
    }

    pub fn exact(value: BigRational) -> Self {
        CertifiedReal {
            approx: value,
            err: BigRational::zero(),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        CertifiedReal::exact(BigRational::from_integer(n.into()))
    }

    pub fn approx(&self) -> &BigRational {
        &self.approx
    }

    pub fn err(&self) -> &BigRational {
        &self.err
    }

    pub fn lower(&self) -> BigRational {
        &self.approx - &self.err
    }

    pub fn upper(&self) -> BigRational {
        &self.approx + &self.err
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (&self.approx - x).abs() <= self.err
    }

    /// True when the two enclosures intersect, i.e. the approximations agree
    /// within the sum of both bounds.
    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        (&self.approx - &other.approx).abs() <= &self.err + &other.err
    }

    /// Strict inclusion of the whole enclosure in the open interval `(lo, hi)`.
    pub fn strictly_inside(&self, lo: &BigRational, hi: &BigRational) -> bool {
        self.lower() > *lo && self.upper() < *hi
    }

    /// Upper bound on `|x|` over the enclosure.
    pub fn mag(&self) -> BigRational {
        self.approx.abs() + &self.err
    }

    pub fn neg(&self) -> CertifiedReal {
        CertifiedReal {
            approx: -&self.approx,
            err: self.err.clone(),
        }
    }

    pub fn add(&self, rhs: &CertifiedReal) -> CertifiedReal {
        CertifiedReal {
            approx: &self.approx + &rhs.approx,
            err: &self.err + &rhs.err,
        }
    }

    pub fn sub(&self, rhs: &CertifiedReal) -> CertifiedReal {
        CertifiedReal {
            approx: &self.approx - &rhs.approx,
            err: &self.err + &rhs.err,
        }
    }

    pub fn add_rational(&self, q: &BigRational) -> CertifiedReal {
        CertifiedReal {
            approx: &self.approx + q,
            err: self.err.clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> CertifiedReal {
        CertifiedReal {
            approx: &self.approx * q,
            err: &self.err * q.abs(),
        }
    }

    /// `|xy - x~y~| <= |x~| ey + |y~| ex + ex ey`.
    pub fn mul(&self, rhs: &CertifiedReal) -> CertifiedReal {
        let err =
            self.approx.abs() * &rhs.err + rhs.approx.abs() * &self.err + &self.err * &rhs.err;
        CertifiedReal {
            approx: &self.approx * &rhs.approx,
            err,
        }
    }

    /// `|1/y - 1/y~| <= ey / (|y~| (|y~| - ey))`, defined when `|y~| > ey`.
    pub fn recip(&self) -> Result<CertifiedReal> {
        let a = self.approx.abs();
        if a <= self.err {
            return Err(Error::DivisionByZero);
        }
        let err = &self.err / (&a * (&a - &self.err));
        Ok(CertifiedReal {
            approx: self.approx.recip(),
            err,
        })
    }

    pub fn div(&self, rhs: &CertifiedReal) -> Result<CertifiedReal> {
        Ok(self.mul(&rhs.recip()?))
    }

    /// Integer power. For `m >= 0` the bound is `m * M^(m-1) * err` with
    /// `M = |approx| + err`; negative powers go through [`recip`](Self::recip).
    pub fn powi(&self, m: i64) -> Result<CertifiedReal> {
        if m < 0 {
            return self.recip()?.powi(-m);
        }
        if m == 0 {
            return Ok(CertifiedReal::from_integer(1));
        }
        let mu = m as usize;
        let approx = num_traits::pow(self.approx.clone(), mu);
        let err = if self.err.is_zero() {
            BigRational::zero()
        } else {
            BigRational::from_integer(BigInt::from(m))
                * num_traits::pow(self.mag(), mu - 1)
                * &self.err
        };
        Ok(CertifiedReal { approx, err })
    }

    /// Rounds `approx` to the nearest multiple of `2^-bits` and the bound
    /// upward to about 64 significant bits; the enclosure only grows.
    pub fn compact(&self, bits: u64) -> CertifiedReal {
        let scale = BigInt::one() << bits;
        let scaled = &self.approx * BigRational::from_integer(scale.clone());
        let rounded = BigRational::new(scaled.round().to_integer(), scale);
        let moved = (&self.approx - &rounded).abs();
        CertifiedReal {
            approx: rounded,
            err: round_up(&(&self.err + moved), 64),
        }
    }
}

/// Smallest dyadic `>= q` with about `sig` significant bits (`q >= 0`).
pub fn round_up(q: &BigRational, sig: u64) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    let shift = sig as i64 - (num_bits - den_bits);
    if shift <= 0 {
        // Already coarser than `sig` bits: round up to an integer multiple of 2^-shift.
        let unit = BigRational::from_integer(BigInt::one() << (-shift) as u64);
        return (q / &unit).ceil() * unit;
    }
    let scale = BigInt::one() << shift as u64;
    let (quot, rem) = (q.numer() * &scale).div_rem(q.denom());
    let up = if rem.is_zero() { quot } else { quot + 1 };
    BigRational::new(up, scale)
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (value, bound) = crate::decimal::certified_strings(self);
        write!(f, "{value} ± {bound}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cr(n: i64, d: i64, en: i64, ed: i64) -> CertifiedReal {
        CertifiedReal::new(q(n, d), q(en, ed))
    }

    #[test]
    fn enclosure_queries() {
        let x = cr(3, 2, 1, 10);
        assert!(x.contains(&q(8, 5)));
        assert!(!x.contains(&q(17, 10)));
        assert!(x.strictly_inside(&q(1, 1), &q(2, 1)));
        assert!(!x.strictly_inside(&q(7, 5), &q(2, 1)));
        assert!(x.overlaps(&cr(17, 10, 1, 10)));
        assert!(!x.overlaps(&cr(18, 10, 1, 10)));
    }

    #[test]
    fn recip_rejects_zero_enclosure() {
        assert_eq!(cr(1, 10, 1, 5).recip(), Err(Error::DivisionByZero));
        let r = cr(2, 1, 1, 100).recip().unwrap();
        assert!(r.contains(&q(100, 201)));
        assert!(r.contains(&q(100, 199)));
    }

    #[test]
    fn compact_keeps_enclosure() {
        let x = cr(1, 3, 1, 1_000_000);
        let c = x.compact(40);
        assert!(c.lower() <= x.lower());
        assert!(c.upper() >= x.upper());
        assert!(c.approx().denom() <= &(BigInt::one() << 40u32));
    }

    #[test]
    fn round_up_is_upper_bound() {
        for (n, d) in [(1, 3), (22, 7), (1, 1 << 40), (123456789, 1000)] {
            let r = round_up(&q(n, d), 16);
            assert!(r >= q(n, d));
            assert!(&r - q(n, d) <= q(n, d) / BigRational::from_integer(BigInt::from(1 << 14)));
        }
    }

    fn member(x: &CertifiedReal, t: f64) -> BigRational {
        // A point of the enclosure, parameterised by t in [-1, 1].
        x.approx() + x.err() * BigRational::from_float(t).unwrap()
    }

    proptest! {
        #[test]
        fn operations_enclose_pointwise_results(
            an in -1000i64..1000, ad in 1i64..50, ae in 0i64..20,
            bn in 1i64..1000, bd in 1i64..50, be in 0i64..20,
            s in -1.0f64..1.0, t in -1.0f64..1.0, m in 0i64..8,
        ) {
            let a = cr(an, ad, ae, 100);
            let b = cr(bn, bd, be, 1000);
            let x = member(&a, s);
            let y = member(&b, t);
            prop_assert!(a.add(&b).contains(&(&x + &y)));
            prop_assert!(a.sub(&b).contains(&(&x - &y)));
            prop_assert!(a.mul(&b).contains(&(&x * &y)));
            if let Ok(r) = a.div(&b) {
                prop_assert!(r.contains(&(&x / &y)));
            }
            prop_assert!(a.powi(m).unwrap().contains(&num_traits::pow(x.clone(), m as usize)));
        }
    }
}
