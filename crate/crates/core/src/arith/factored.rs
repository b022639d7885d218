//! Positive rationals kept as products of integer powers.
//!
//! Values such as `tau^F` grow to tens of millions of bits long before the
//! exponents do, so equality is decided on a pairwise-coprime factor basis
//! instead of by expansion.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};

use super::Fraction;
use crate::error::{Error, Result};

/// A positive rational `prod base_i ^ exp_i` with integer bases `> 1`.
#[derive(Clone, Debug, Default)]
pub struct PowerProduct {
    factors: Vec<(BigInt, i64)>,
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::default()
    }

    /// `base^exp` for a positive integer base.
    pub fn power(base: BigInt, exp: i64) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::Domain(format!("non-positive base {base}")));
        }
        let mut p = PowerProduct::one();
        if !base.is_one() && exp != 0 {
            p.factors.push((base, exp));
        }
        Ok(p)
    }

    /// `num/den` for positive integers.
    pub fn ratio(num: BigInt, den: BigInt) -> Result<Self> {
        Ok(PowerProduct::power(num, 1)?.mul(&PowerProduct::power(den, -1)?))
    }

    pub fn factors(&self) -> &[(BigInt, i64)] {
        &self.factors
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        PowerProduct { factors }
    }

    pub fn pow(&self, k: i64) -> PowerProduct {
        if k == 0 {
            return PowerProduct::one();
        }
        PowerProduct {
            factors: self.factors.iter().map(|(b, e)| (b.clone(), e * k)).collect(),
        }
    }

    pub fn recip(&self) -> PowerProduct {
        self.pow(-1)
    }

    /// Rewrite over a pairwise-coprime basis and drop trivial factors.
    /// The result is canonical up to the order of its factors.
    pub fn refined(&self) -> PowerProduct {
        let mut basis: Vec<(BigInt, i64)> = Vec::new();
        for (b, e) in &self.factors {
            insert_coprime(&mut basis, b.clone(), *e);
        }
        basis.retain(|(_, e)| *e != 0);
        basis.sort();
        PowerProduct { factors: basis }
    }

    pub fn is_one(&self) -> bool {
        self.refined().factors.is_empty()
    }

    /// Exact expansion. Cost grows with `sum |exp| * bits(base)`.
    pub fn to_fraction(&self) -> Fraction {
        let r = self.refined();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (b, e) in &r.factors {
            let k = e.unsigned_abs();
            if *e > 0 {
                num *= Pow::pow(b, k);
            } else {
                den *= Pow::pow(b, k);
            }
        }
        // Coprime bases make the expanded numerator and denominator coprime.
        Fraction::new_raw(num, den)
    }

    /// Floating-point estimate of `log2` of the value.
    pub fn log2_estimate(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| *e as f64 * log2_big(b))
            .sum()
    }
}

fn log2_big(b: &BigInt) -> f64 {
    let bits = b.bits();
    if bits <= 60 {
        return (b.to_string().parse::<f64>().unwrap_or(f64::NAN)).log2();
    }
    let top: BigInt = b >> (bits - 60);
    top.to_string().parse::<f64>().unwrap_or(f64::NAN).log2() + (bits - 60) as f64
}

fn insert_coprime(basis: &mut Vec<(BigInt, i64)>, b: BigInt, e: i64) {
    if b.is_one() || e == 0 {
        return;
    }
    for i in 0..basis.len() {
        let g = basis[i].0.gcd(&b);
        if g.is_one() {
            continue;
        }
        if g == basis[i].0 && g == b {
            basis[i].1 += e;
            return;
        }
        let (c, f) = basis.swap_remove(i);
        let c_rest = &c / &g;
        let b_rest = &b / &g;
        insert_coprime(basis, g, e + f);
        insert_coprime(basis, c_rest, f);
        insert_coprime(basis, b_rest, e);
        return;
    }
    basis.push((b, e));
}

impl PartialEq for PowerProduct {
    fn eq(&self, other: &Self) -> bool {
        self.mul(&other.recip()).is_one()
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| format!("{b}^{e}"))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}
