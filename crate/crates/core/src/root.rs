//! The dominant root `rho_k` of `x^(k+1) - 2x^k + 1 = 0` and the
//! asymptotic equivalent of `F_n^(k)`.
//!
//! `eps_k = 2 - rho_k` is the fixed point of `g(e) = (2 - e)^(-k)` on
//! `[0, 2^(1-k)]`. On that interval `g` is a contraction with constant
//! `L_k = k (2 - 2^(1-k))^(-(k+1)) < 1`, so for any point `x` of the
//! interval `|x - eps_k| <= |x - g(x)| / (1 - L_k)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certified::CertifiedReal;
use crate::error::{Error, Result};
use crate::sequence::{kfib_order_k, KIndex};

/// One accepted iterate of the fixed-point map.
#[derive(Clone, Debug)]
pub struct FixedPointStep {
    /// The iterate, a multiple of `2^-precision`.
    pub value: BigRational,
    /// `|value - previous value|`.
    pub step: BigRational,
}

#[derive(Clone, Debug)]
pub struct FixedPointTrace {
    pub contraction: BigRational,
    /// Working precision in bits; each iterate is `g(previous)` rounded down
    /// to a multiple of `2^-precision`.
    pub precision: u64,
    pub steps: Vec<FixedPointStep>,
    /// `residual(final) / (1 - L)`, a rigorous bound on the final error.
    pub final_bound: BigRational,
}

impl FixedPointTrace {
    /// Rounding error committed on each iterate.
    pub fn rounding(&self) -> BigRational {
        pow2(-(self.precision as i64))
    }

    /// `(L |step| + rounding) / (1 - L)` for an accepted iterate.
    pub fn a_posteriori_bound(&self, step: &FixedPointStep) -> BigRational {
        let one = BigRational::one();
        (&self.contraction * &step.step + self.rounding()) / (one - &self.contraction)
    }
}

pub(crate) fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << e.unsigned_abs())
    }
}

/// `L_k = k (2 - 2^(1-k))^(-(k+1))`.
pub fn contraction_constant(k: KIndex) -> BigRational {
    let kk = k.as_i64();
    let base = BigRational::from_integer(BigInt::from(2)) - pow2(1 - kk);
    BigRational::from_integer(BigInt::from(kk)) / num_traits::pow(base, (kk + 1) as usize)
}

/// `|x - (2 - x)^(-k)|`, exactly.
pub fn fixed_point_residual(k: KIndex, x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let g = num_traits::pow(two - x, k.get() as usize).recip();
    (x - g).abs()
}

fn check_bits(bits: u32) -> Result<()> {
    if bits < 8 {
        Err(Error::PrecisionTooLow(bits))
    } else {
        Ok(())
    }
}

/// Runs the fixed-point iteration for `eps_k` and returns the certified
/// result together with every accepted iterate.
pub fn epsilon_with_trace(k: KIndex, bits: u32) -> Result<(CertifiedReal, FixedPointTrace)> {
    check_bits(bits)?;
    let kk = k.get() as u64;
    let p = 4 * bits as u64 + 2 * kk;
    let contraction = contraction_constant(k);
    let one = BigRational::one();
    let gap = &one - &contraction;
    let target = pow2(-(bits as i64));
    let stop = pow2(-(bits as i64) - 1);

    let numer = BigInt::one() << (p * (kk + 1));
    let two_scaled = BigInt::from(2) << p;
    let denom = BigInt::one() << p;

    // x = m / 2^p, starting from 2^-k.
    let mut m = if p >= kk {
        BigInt::one() << (p - kk)
    } else {
        BigInt::zero()
    };
    let mut steps = Vec::new();
    loop {
        let n = &two_scaled - &m;
        let next = &numer / num_traits::pow(n, kk as usize);
        let step = BigRational::new((&next - &m).abs(), denom.clone());
        m = next;
        let value = BigRational::new(m.clone(), denom.clone());
        let done = &contraction * &step / &gap <= stop;
        steps.push(FixedPointStep {
            value: value.clone(),
            step,
        });
        if done {
            let final_bound = fixed_point_residual(k, &value) / &gap;
            if final_bound <= target {
                let trace = FixedPointTrace {
                    contraction,
                    precision: p,
                    steps,
                    final_bound,
                };
                return Ok((CertifiedReal::new(value, target), trace));
            }
        }
        if steps.len() > 64 * p as usize {
            return Err(Error::Inconsistency(
                "fixed-point iteration failed to converge".into(),
            ));
        }
    }
}

/// `eps_k = 2 - rho_k` with error at most `2^-bits`.
pub fn epsilon(k: KIndex, bits: u32) -> Result<CertifiedReal> {
    epsilon_with_trace(k, bits).map(|(e, _)| e)
}

/// `rho_k = 2 - eps_k` with error at most `2^-bits`.
pub fn rho(k: KIndex, bits: u32) -> Result<CertifiedReal> {
    let e = epsilon(k, bits)?;
    Ok(e.neg()
        .add_rational(&BigRational::from_integer(BigInt::from(2))))
}

/// The open interval `(2 - 2^(1-k), 2)` known to contain `rho_k`.
pub fn rho_bounds(k: KIndex) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(BigInt::from(2));
    (&two - pow2(1 - k.as_i64()), two)
}

fn relative_target(x: &CertifiedReal, bits: u32) -> BigRational {
    let low = (x.approx().abs() - x.err()).max(BigRational::one());
    low * pow2(-(bits as i64))
}

/// Extra working bits needed to bring `err` under `target`.
fn deficit_bits(err: &BigRational, target: &BigRational) -> u32 {
    let ratio = err / target;
    let bits = ratio.numer().bits() as i64 - ratio.denom().bits() as i64;
    bits.max(0) as u32 + 8
}

/// `(rho - 1) / ((k + 1) rho - 2k) * rho^(n - 1)` from a given enclosure of `rho`.
fn asymptotic_from_rho(k: KIndex, n: u64, rho: &CertifiedReal) -> Result<CertifiedReal> {
    let kk = BigInt::from(k.get());
    let one = BigRational::one();
    let num = rho.add_rational(&-one);
    let den = rho
        .scale(&BigRational::from_integer(&kk + 1))
        .add_rational(&-BigRational::from_integer(2 * kk));
    let power = rho.powi(n as i64 - 1)?;
    Ok(num.div(&den)?.mul(&power))
}

/// `As_n^(k)` with error at most `2^-bits * max(1, |As_n^(k)|)`.
pub fn asymptotic(k: KIndex, n: u64, bits: u32) -> Result<CertifiedReal> {
    check_bits(bits)?;
    let mut work = bits + 16 + (64 - n.leading_zeros());
    loop {
        let r = rho(k, work)?.compact(4 * work as u64);
        let value = asymptotic_from_rho(k, n, &r)?.compact(bits as u64 + 32);
        let target = relative_target(&value, bits);
        if *value.err() <= target {
            return Ok(value);
        }
        work += deficit_bits(value.err(), &target);
    }
}

/// `F_n^(k) / As_n^(k)` with error at most `2^-bits * max(1, |ratio|)`.
pub fn asymptotic_ratio(k: KIndex, n: u64, bits: u32) -> Result<CertifiedReal> {
    check_bits(bits)?;
    if n == 0 {
        return Err(Error::IndexTooSmall { n: 0, min: 1 });
    }
    let f = CertifiedReal::from_integer(kfib_order_k(k, n as usize));
    let mut work = bits + 8;
    loop {
        let ratio = f.div(&asymptotic(k, n, work)?)?.compact(bits as u64 + 32);
        let target = relative_target(&ratio, bits);
        if *ratio.err() <= target {
            return Ok(ratio);
        }
        work += deficit_bits(ratio.err(), &target);
    }
}
