//! Exact rational arithmetic helpers.
//!
//! All normalized lengths, slacks, and tolerances in this crate are
//! arbitrary-precision fractions; nothing is ever rounded through a float.
//! `Rat` is kept reduced with a positive denominator by its backing type.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = num_rational::BigRational;

/// Rational from an unsigned integer.
pub fn rat_u(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational denominator must be nonzero");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3/4"`, `"3"`, or `"-3/4"`. Whitespace around the slash is allowed.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    cleaned
        .parse::<Rat>()
        .map_err(|e| Error::parse(format!("bad rational {text:?}: {e}")))
}

/// Renders a rational as `num/den`, with the denominator always explicit
/// (`2` prints as `2/1`) so downstream columns stay type-stable.
pub fn rat_display(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
/// Used alongside the exact fraction for human-readable tables.
pub fn rat_decimal(r: &Rat, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let int_part = abs.numer() / abs.denom();
    let mut rem = abs.numer() - &int_part * abs.denom();
    let mut frac = String::with_capacity(digits as usize);
    let ten = BigInt::from(10u32);
    for _ in 0..digits {
        rem *= &ten;
        let digit = &rem / abs.denom();
        rem -= &digit * abs.denom();
        frac.push_str(&digit.to_string());
    }
    format!("{sign}{int_part}.{frac}")
}

/// Ceiling of `s * q` as a machine integer. Requires `s > 0`.
pub fn ceil_mul(s: &Rat, q: u64) -> Result<u64> {
    if !s.is_positive() {
        return Err(Error::InvalidQuery(format!("s must be positive, got {}", rat_display(s))));
    }
    let prod = s * rat_u(q);
    let num = prod.numer();
    let den = prod.denom();
    // ceil(num/den) for positive num/den.
    let q_big = (num + den - BigInt::one()) / den;
    q_big
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("ceil({} * {q}) exceeds u64", rat_display(s))))
}

/// `base^exp` as u64, with an overflow check.
pub fn pow_u64(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp} exceeds u64")))
}

/// `r^exp` for a rational base and machine exponent.
pub fn rat_pow(r: &Rat, exp: u32) -> Rat {
    let mut out = Rat::one();
    let mut acc = r.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            out *= &acc;
        }
        e >>= 1;
        if e > 0 {
            acc = &acc * &acc;
        }
    }
    out
}

/// Exact factorial.
pub fn factorial(n: usize) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=n {
        out *= BigInt::from(k);
    }
    out
}

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["1/2", "3", "7/3", "-2/5"] {
            let r = parse_rat(text).unwrap();
            let shown = rat_display(&r);
            assert_eq!(parse_rat(&shown).unwrap(), r);
        }
        assert_eq!(rat_display(&rat(4, 2)), "2/1");
        assert!(parse_rat("x/y").is_err());
    }

    #[test]
    fn ceil_mul_matches_hand_values() {
        assert_eq!(ceil_mul(&rat(1, 2), 9).unwrap(), 5);
        assert_eq!(ceil_mul(&rat(1, 1), 9).unwrap(), 9);
        assert_eq!(ceil_mul(&rat(2, 3), 3).unwrap(), 2);
        assert_eq!(ceil_mul(&rat(1, 3), 1).unwrap(), 1);
        assert!(ceil_mul(&rat(-1, 2), 9).is_err());
    }

    #[test]
    fn decimal_rendering_truncates() {
        assert_eq!(rat_decimal(&rat(5, 3), 6), "1.666666");
        assert_eq!(rat_decimal(&rat(-1, 8), 4), "-0.1250");
        assert_eq!(rat_decimal(&rat_u(2), 3), "2.000");
    }

    #[test]
    fn binomial_and_factorial_small_values() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
