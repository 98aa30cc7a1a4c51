//! Exact rationals whose denominator is a power of two.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `numerator / 2^exponent`, kept canonical: the numerator is odd, or it is
/// zero and the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: BigInt, exponent: u64) -> Self {
        let mut d = DyadicRational {
            numerator,
            exponent,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        DyadicRational {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        DyadicRational {
            numerator: n.into(),
            exponent: 0,
        }
    }

    /// `2^e` for any integer `e`.
    pub fn pow2(e: i64) -> Self {
        DyadicRational::from_integer(1).mul_pow2(e)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numerator.clone())
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.exponent)
    }

    /// Multiplies by `2^e`; lossless for either sign of `e`.
    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return DyadicRational::zero();
        }
        if e >= 0 {
            let e = e as u64;
            if e >= self.exponent {
                DyadicRational {
                    numerator: &self.numerator << (e - self.exponent),
                    exponent: 0,
                }
            } else {
                DyadicRational {
                    numerator: self.numerator.clone(),
                    exponent: self.exponent - e,
                }
            }
        } else {
            DyadicRational::new(self.numerator.clone(), self.exponent + e.unsigned_abs())
        }
    }

    pub fn abs(&self) -> Self {
        DyadicRational {
            numerator: self.numerator.abs(),
            exponent: self.exponent,
        }
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self
            .numerator
            .trailing_zeros()
            .unwrap_or(0)
            .min(self.exponent);
        if tz > 0 {
            self.numerator >>= tz;
            self.exponent -= tz;
        }
    }

    /// Numerators of `self` and `other` over the common denominator `2^e`.
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u64) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
            e,
        )
    }
}

impl Default for DyadicRational {
    fn default() -> Self {
        DyadicRational::zero()
    }
}

impl From<BigInt> for DyadicRational {
    fn from(n: BigInt) -> Self {
        DyadicRational::from_integer(n)
    }
}

impl From<i64> for DyadicRational {
    fn from(n: i64) -> Self {
        DyadicRational::from_integer(n)
    }
}

impl From<&DyadicRational> for BigRational {
    fn from(d: &DyadicRational) -> Self {
        d.to_rational()
    }
}

impl Add<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let (a, b, e) = self.aligned(rhs);
        DyadicRational::new(a + b, e)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: DyadicRational) -> DyadicRational {
        &self + &rhs
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, rhs: &DyadicRational) {
        *self = &*self + rhs;
    }
}

impl Sub<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        let (a, b, e) = self.aligned(rhs);
        DyadicRational::new(a - b, e)
    }
}

impl Sub for DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: DyadicRational) -> DyadicRational {
        &self - &rhs
    }
}

impl Mul<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;
    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        DyadicRational::new(
            &self.numerator * &rhs.numerator,
            self.exponent + rhs.exponent,
        )
    }
}

impl Neg for DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        DyadicRational {
            numerator: -self.numerator,
            exponent: self.exponent,
        }
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact decimal expansion; every dyadic rational has a finite one.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            return write!(f, "{}", self.numerator);
        }
        // n / 2^e = n * 5^e / 10^e
        let scaled =
            self.numerator.abs() * num_traits::pow(BigInt::from(5), self.exponent as usize);
        let (int_part, frac_part) =
            scaled.div_rem(&num_traits::pow(BigInt::from(10), self.exponent as usize));
        let sign = if self.numerator.is_negative() {
            "-"
        } else {
            ""
        };
        let frac = frac_part.to_string();
        let pad = self.exponent as usize - frac.len();
        write!(f, "{sign}{int_part}.{}{frac}", "0".repeat(pad))
    }
}
