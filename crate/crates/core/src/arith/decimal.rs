use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, Zero};

use super::Fraction;
use crate::error::{Error, Result};

/// `round(r * 10^digits)` with ties going to the even neighbour.
pub fn round_scaled_half_even(r: &Fraction, digits: usize) -> BigInt {
    let scale: BigInt = Pow::pow(BigInt::from(10), digits);
    let num = r.numer() * &scale;
    let den = r.denom();
    let (q, rem): (BigInt, BigInt) = num.div_mod_floor(den);
    match (rem * BigInt::from(2)).cmp(den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

fn format_scaled(n: &BigInt, digits: usize) -> String {
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let split = s.len() - digits;
    let mut out = String::with_capacity(s.len() + 2);
    if neg {
        out.push('-');
    }
    out.push_str(&s[..split]);
    if digits > 0 {
        out.push('.');
        out.push_str(&s[split..]);
    }
    out
}

/// Correctly rounded decimal expansion with exactly `digits` fractional
/// digits. Rounding is round-half-to-even on the exact rational.
pub fn fraction_to_decimal(r: &Fraction, digits: usize) -> Result<String> {
    if r.is_negative() || *r >= Fraction::from_integer(BigInt::from(10)) {
        return Err(Error::Parameter(format!(
            "decimal expansion expects 0 <= r < 10, got {r}"
        )));
    }
    if digits == 0 {
        return Err(Error::Parameter("digits must be at least 1".into()));
    }
    Ok(format_scaled(&round_scaled_half_even(r, digits), digits))
}

/// Unrestricted variant used for display; accepts any sign and magnitude.
pub fn signed_fraction_to_decimal(r: &Fraction, digits: usize) -> String {
    format_scaled(&round_scaled_half_even(r, digits), digits)
}

/// Scientific notation with `sig` significant digits, rounded up, for a
/// non-negative rational. Used to print radii without understating them.
pub fn fraction_to_sci_up(r: &Fraction, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let ten = BigInt::from(10);
    // Estimate the decimal exponent, then correct it exactly.
    let est = (r.numer().bits() as f64 - r.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut k = est.floor() as i64;
    let pow10 = |e: i64| -> Fraction {
        let p: BigInt = Pow::pow(ten.clone(), e.unsigned_abs());
        if e >= 0 {
            Fraction::from_integer(p)
        } else {
            Fraction::new(BigInt::from(1), p)
        }
    };
    while *r >= pow10(k + 1) {
        k += 1;
    }
    while *r < pow10(k) {
        k -= 1;
    }
    let scaled = r * pow10(sig as i64 - 1 - k);
    let mut m = scaled.ceil().to_integer();
    let limit: BigInt = Pow::pow(ten.clone(), sig);
    if m >= limit {
        m = Pow::pow(ten, sig - 1);
        k += 1;
    }
    let digits = m.to_string();
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{head}e{k}")
    } else {
        format!("{head}.{tail}e{k}")
    }
}

/// Parse a plain decimal literal such as `-12.0345` into an exact fraction.
pub fn parse_decimal(s: &str) -> Result<Fraction> {
    let bad = || Error::Parameter(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den: BigInt = Pow::pow(BigInt::from(10), frac_part.len());
    let r = Fraction::new(num, den);
    Ok(if neg { -r } else { r })
}
