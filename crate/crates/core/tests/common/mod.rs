//! Oracles that share no code with the library: rational enclosures from
//! integer square roots and the `atanh` series, and plain integer matrices.

#![allow(dead_code)]

use jsrlab::arith::{Fraction, RealBall};
use num_bigint::BigInt;

pub fn frac(n: i64, d: i64) -> Fraction {
    Fraction::new(n.into(), d.into())
}

pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

fn floor_to(x: &Fraction, scale: &BigInt) -> Fraction {
    let n = (x * Fraction::from_integer(scale.clone())).floor().to_integer();
    Fraction::new(n, scale.clone())
}

fn ceil_to(x: &Fraction, scale: &BigInt) -> Fraction {
    let n = (x * Fraction::from_integer(scale.clone())).ceil().to_integer();
    Fraction::new(n, scale.clone())
}

/// `[lo, hi]` around `sqrt(n)` of width `10^-digits`.
pub fn sqrt_bounds(n: &BigInt, digits: u32) -> (Fraction, Fraction) {
    let scale = pow10(digits);
    let s = (n * &scale * &scale).sqrt();
    (
        Fraction::new(s.clone(), scale.clone()),
        Fraction::new(s + 1, scale),
    )
}

/// `2 atanh(z)` bracketed for `0 <= z_lo <= z_hi <= 1/3`.
fn two_atanh_bounds(z_lo: &Fraction, z_hi: &Fraction, digits: u32) -> (Fraction, Fraction) {
    let scale = pow10(digits + 10);
    let terms = digits + 10;
    let z2_lo = floor_to(&(z_lo * z_lo), &scale);
    let z2_hi = ceil_to(&(z_hi * z_hi), &scale);
    let mut p_lo = z_lo.clone();
    let mut p_hi = z_hi.clone();
    let mut lo = Fraction::from_integer(0.into());
    let mut hi = lo.clone();
    for j in 0..terms {
        let k = Fraction::from_integer((2 * j + 1).into());
        lo += floor_to(&(&p_lo / &k), &scale);
        hi += ceil_to(&(&p_hi / &k), &scale);
        p_lo = floor_to(&(&p_lo * &z2_lo), &scale);
        p_hi = ceil_to(&(&p_hi * &z2_hi), &scale);
    }
    // Geometric tail: sum_{j >= K} z^{2j+1}/(2j+1) <= z^{2K+1} / ((2K+1)(1 - z^2)).
    let one = Fraction::from_integer(1.into());
    let k = Fraction::from_integer((2 * terms + 1).into());
    hi += ceil_to(&(&p_hi / (k * (&one - &z2_hi))), &scale);
    let two = Fraction::from_integer(2.into());
    (&lo * &two, &hi * &two)
}

/// `[lo, hi]` around `ln x` for rational `x >= 1`, width about `10^-digits`.
pub fn ln_bounds(x: &Fraction, digits: u32) -> (Fraction, Fraction) {
    let one = Fraction::from_integer(1.into());
    let two = Fraction::from_integer(2.into());
    assert!(*x >= one, "ln oracle needs x >= 1");
    let mut y = x.clone();
    let mut k = 0i64;
    while y >= two {
        y /= &two;
        k += 1;
    }
    let scale = pow10(digits + 10);
    let z = (&y - &one) / (&y + &one);
    let (ly_lo, ly_hi) = two_atanh_bounds(&floor_to(&z, &scale), &ceil_to(&z, &scale), digits);
    let third = frac(1, 3);
    let (l2_lo, l2_hi) = two_atanh_bounds(&third, &third, digits);
    let kf = Fraction::from_integer(k.into());
    (&kf * l2_lo + ly_lo, &kf * l2_hi + ly_hi)
}

/// `ln` of the larger root of `x^2 - t x + 1` for an integer `t >= 2`.
pub fn ln_rho_bounds(t: &BigInt, digits: u32) -> (Fraction, Fraction) {
    if *t == BigInt::from(2) {
        let zero = Fraction::from_integer(0.into());
        return (zero.clone(), zero);
    }
    let disc = t * t - 4;
    let (s_lo, s_hi) = sqrt_bounds(&disc, digits + 5);
    let tf = Fraction::from_integer(t.clone());
    let two = Fraction::from_integer(2.into());
    let lo = ln_bounds(&((&tf + s_lo) / &two), digits).0;
    let hi = ln_bounds(&((&tf + s_hi) / &two), digits).1;
    (lo, hi)
}

/// `ln((1 + sqrt 5) / 2)`.
pub fn ln_phi_bounds(digits: u32) -> (Fraction, Fraction) {
    let (s_lo, s_hi) = sqrt_bounds(&BigInt::from(5), digits + 5);
    let one = Fraction::from_integer(1.into());
    let two = Fraction::from_integer(2.into());
    (
        ln_bounds(&((&one + s_lo) / &two), digits).0,
        ln_bounds(&((&one + s_hi) / &two), digits).1,
    )
}

pub fn encloses(ball: &RealBall, lo: &Fraction, hi: &Fraction) -> bool {
    ball.lower().to_fraction() <= *lo && *hi <= ball.upper().to_fraction()
}

/// `A_{u_1} ... A_{u_n}` with `A0 = [[1,1],[0,1]]`, `A1 = [[1,0],[1,1]]`.
pub fn product_u128(bits: &[u8]) -> [u128; 4] {
    let mut m = [1u128, 0, 0, 1];
    for &b in bits {
        m = if b == 0 {
            [m[0], m[0] + m[1], m[2], m[2] + m[3]]
        } else {
            [m[0] + m[1], m[1], m[2] + m[3], m[3]]
        };
    }
    m
}

pub fn trace_u128(bits: &[u8]) -> u128 {
    let m = product_u128(bits);
    m[0] + m[3]
}

pub fn word_bits(code: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect()
}

/// Any two factors of equal length differ by at most one in their count of ones.
pub fn balanced_by_definition(u: &[u8]) -> bool {
    let n = u.len();
    for len in 1..=n {
        let counts: Vec<i64> = (0..=n - len)
            .map(|i| u[i..i + len].iter().map(|&b| b as i64).sum())
            .collect();
        for a in &counts {
            for b in &counts {
                if (a - b).abs() > 1 {
                    return false;
                }
            }
        }
    }
    true
}

pub fn power(u: &[u8], k: usize) -> Vec<u8> {
    u.iter().copied().cycle().take(u.len() * k).collect()
}

pub fn rotations(u: &[u8]) -> Vec<Vec<u8>> {
    (0..u.len())
        .map(|i| u[i..].iter().chain(&u[..i]).copied().collect())
        .collect()
}

pub fn to_string(u: &[u8]) -> String {
    u.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
