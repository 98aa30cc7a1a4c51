//! Decimal rendering and parsing of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certified::CertifiedReal;

fn pow10(e: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// `q` rounded half away from zero to `digits` fractional digits.
pub fn format_fixed(q: &BigRational, digits: u64) -> String {
    let scaled = q.abs() * BigRational::from_integer(pow10(digits));
    let n = scaled.round().to_integer();
    let sign = if q.is_negative() && !n.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{n}");
    }
    let (int_part, frac_part) = n.div_rem(&pow10(digits));
    let frac = frac_part.to_string();
    format!(
        "{sign}{int_part}.{}{frac}",
        "0".repeat(digits as usize - frac.len())
    )
}

/// Value of the string produced by [`format_fixed`], as an exact rational.
fn fixed_value(q: &BigRational, digits: u64) -> BigRational {
    let scale = pow10(digits);
    let n = (q.abs() * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let v = BigRational::new(n, scale);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Rough `floor(log10 |q|)` from bit lengths; callers correct it.
fn log10_estimate(q: &BigRational) -> i64 {
    let bits = q.numer().bits() as i64 - q.denom().bits() as i64;
    (bits as f64 * std::f64::consts::LOG10_2).floor() as i64
}

fn pow10_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow10(e as u64))
    } else {
        BigRational::new(BigInt::one(), pow10(e.unsigned_abs()))
    }
}

/// A nonnegative bound rounded *up* to three significant digits in
/// scientific notation, e.g. `2.94e-39`. Zero renders as `0`.
pub fn format_bound(q: &BigRational) -> String {
    assert!(!q.is_negative(), "bounds are nonnegative");
    if q.is_zero() {
        return "0".to_string();
    }
    let mut e = log10_estimate(q);
    while pow10_rational(e) > *q {
        e -= 1;
    }
    while pow10_rational(e + 1) <= *q {
        e += 1;
    }
    let mut mantissa = (q / pow10_rational(e - 2)).ceil().to_integer();
    if mantissa >= BigInt::from(1000) {
        mantissa = BigInt::from(100);
        e += 1;
    }
    let m = mantissa.to_string();
    format!("{}.{}e{}", &m[..1], &m[1..], e)
}

/// Renders a certified value as `(value, error_bound)` decimal strings. The
/// value carries enough digits to be meaningful at the bound's scale and the
/// returned bound covers both the certified error and the decimal rounding.
pub fn certified_strings(x: &CertifiedReal) -> (String, String) {
    let err = x.err();
    if err.is_zero() {
        let digits = terminating_digits(x.approx()).unwrap_or(40);
        let bound = (x.approx() - fixed_value(x.approx(), digits)).abs();
        return (format_fixed(x.approx(), digits), format_bound(&bound));
    }
    let digits = (2 - log10_estimate(err)).max(0) as u64;
    let shown = fixed_value(x.approx(), digits);
    let bound = err + (x.approx() - &shown).abs();
    (format_fixed(x.approx(), digits), format_bound(&bound))
}

/// Number of fractional digits in the exact expansion of `q`, if it terminates.
pub fn terminating_digits(q: &BigRational) -> Option<u64> {
    let mut d = q.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0u64, 0u64);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    d.is_one().then_some(twos.max(fives))
}

/// Exact rendering of a rational with a terminating decimal expansion.
pub fn format_exact(q: &BigRational) -> Option<String> {
    terminating_digits(q).map(|d| format_fixed(q, d))
}

/// Parses `12`, `-0.125`, `1e-12`, `2.5E3` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let value = BigRational::from_integer(digits) * pow10_rational(exp - frac_part.len() as i64);
    Some(if negative { -value } else { value })
}
