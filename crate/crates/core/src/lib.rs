//! Exact computation of k-Fibonacci numbers.
//!
//! The crate evaluates `F_n^(k)` through several independent routes (the
//! order-k recurrence, the order-(k+1) recurrence, finite sums of
//! generalized binomial coefficients) and computes the dominant root
//! `rho_k` of `x^k = x^(k-1) + ... + 1` to certified precision. Infinite
//! binomial series for `rho_k^n` and for the asymptotic equivalent of
//! `F_n^(k)` are evaluated as exact partial sums with rigorous tail bounds.
//!
//! Everything is exact: integers are [`BigInt`], finite sums are
//! accumulated as [`DyadicRational`], and approximate reals are
//! [`CertifiedReal`] values carrying an exact rational error bound.

pub mod binomial;
pub mod certified;
pub mod cli;
pub mod closed_forms;
pub mod decimal;
pub mod dyadic;
pub mod error;
pub mod root;
pub mod sequence;
pub mod series;
pub mod verify;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use binomial::binom;
pub use certified::CertifiedReal;
pub use dyadic::DyadicRational;
pub use error::{Error, Result};
pub use sequence::{FibTable, KIndex};
