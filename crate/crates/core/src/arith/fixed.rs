//! Directed-rounding kernels on fixed-point integers.
//!
//! A pair `(lo, hi)` at scale `w` stands for the real interval
//! `[lo / 2^w, hi / 2^w]`. Every kernel rounds `lo` down and `hi` up, so the
//! returned pair always brackets the exact mathematical value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{div_ceil, pow2, shr_ceil, shr_floor, Dyadic};

/// `floor(n * 2^w / d)` for `d > 0`; `w` may be negative.
pub(crate) fn div_scaled_floor(n: &BigInt, d: &BigInt, w: i64) -> BigInt {
    if w >= 0 {
        (n << (w as u64)).div_floor(d)
    } else {
        n.div_floor(&(d << ((-w) as u64)))
    }
}

/// `ceil(n * 2^w / d)` for `d > 0`.
pub(crate) fn div_scaled_ceil(n: &BigInt, d: &BigInt, w: i64) -> BigInt {
    if w >= 0 {
        div_ceil(&(n << (w as u64)), d)
    } else {
        div_ceil(n, &(d << ((-w) as u64)))
    }
}

fn ceil_sqrt(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1
    }
}

/// Bounds on `atanh(z)` for `0 <= z_lo/2^w <= z <= z_hi/2^w <= 1/2`.
fn atanh_nonneg(z_lo: &BigInt, z_hi: &BigInt, w: u64) -> (BigInt, BigInt) {
    if z_hi.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let z2_lo = shr_floor(&(z_lo * z_lo), w);
    let z2_hi = shr_ceil(&(z_hi * z_hi), w);
    let mut p_lo = z_lo.clone();
    let mut p_hi = z_hi.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut j: u64 = 0;
    loop {
        let odd = BigInt::from(2 * j + 1);
        sum_lo += p_lo.div_floor(&odd);
        sum_hi += div_ceil(&p_hi, &odd);
        p_lo = shr_floor(&(&p_lo * &z2_lo), w);
        p_hi = shr_ceil(&(&p_hi * &z2_hi), w);
        j += 1;
        if p_hi <= BigInt::one() {
            break;
        }
    }
    // Remaining terms sum to at most z^(2j+1) / ((2j+1)(1 - z^2)) <= 2 p_hi.
    sum_hi += &p_hi * 2;
    (sum_lo, sum_hi)
}

/// Bounds on `ln 2 = 2 atanh(1/3)` at scale `w`.
pub(crate) fn ln2(w: u64) -> (BigInt, BigInt) {
    let three = BigInt::from(3);
    let z_lo = pow2(w).div_floor(&three);
    let z_hi = div_ceil(&pow2(w), &three);
    let (lo, hi) = atanh_nonneg(&z_lo, &z_hi, w);
    (lo * 2, hi * 2)
}

/// Bounds on `ln x` for a positive dyadic `x`, at scale `w`.
pub(crate) fn ln_point(x: &Dyadic, w: u64) -> (BigInt, BigInt) {
    debug_assert!(x.mantissa().is_positive());
    let m = x.mantissa();
    let mut c = m.bits();
    // m / 2^c in [1/2, 1); shift into [3/4, 3/2).
    if m * 4 < pow2(c) * 3 {
        c -= 1;
    }
    let k = c as i64 + x.exponent();
    let two_c = pow2(c);
    let num = m - &two_c;
    let den = m + &two_c;
    let abs_num = num.abs();
    let z_lo = div_scaled_floor(&abs_num, &den, w as i64);
    let z_hi = div_scaled_ceil(&abs_num, &den, w as i64);
    let (a_lo, a_hi) = atanh_nonneg(&z_lo, &z_hi, w);
    let (at_lo, at_hi) = if num.is_negative() {
        (-a_hi, -a_lo)
    } else {
        (a_lo, a_hi)
    };
    if k == 0 {
        return (at_lo * 2, at_hi * 2);
    }
    let (l2_lo, l2_hi) = ln2(w);
    let kk = BigInt::from(k);
    let (kl_lo, kl_hi) = if k > 0 {
        (&kk * l2_lo, &kk * l2_hi)
    } else {
        (&kk * l2_hi, &kk * l2_lo)
    };
    (kl_lo + at_lo * 2, kl_hi + at_hi * 2)
}

/// Lower bound on `sqrt(x)` at scale `w`, `x >= 0`.
pub(crate) fn sqrt_floor(x: &Dyadic, w: i64) -> BigInt {
    let n = x.floor_scaled(2 * w);
    if n.is_negative() {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Upper bound on `sqrt(x)` at scale `w`, `x >= 0`.
pub(crate) fn sqrt_ceil(x: &Dyadic, w: i64) -> BigInt {
    let n = x.ceil_scaled(2 * w);
    if !n.is_positive() {
        return BigInt::zero();
    }
    ceil_sqrt(&n)
}

fn exp_nonneg(x: &Dyadic, w: u64) -> (BigInt, BigInt) {
    if x.is_zero() {
        return (pow2(w), pow2(w));
    }
    // Reduce to r = x / 2^s < 2^-8, then square s times.
    let s = (x.magnitude() + 8).max(0) as u64;
    let growth = if x.magnitude() > 0 {
        // e^x < 2^(2x) bits of integer part, x < 2^magnitude
        2u64.saturating_mul(1u64 << x.magnitude().min(40))
    } else {
        0
    };
    let w2 = w + s + growth + 16;
    let r_lo = x.floor_scaled(w2 as i64 - s as i64);
    let r_hi = x.ceil_scaled(w2 as i64 - s as i64);
    let one = pow2(w2);
    let mut sum_lo = one.clone();
    let mut sum_hi = one.clone();
    let mut t_lo = one.clone();
    let mut t_hi = one;
    let mut n: u64 = 1;
    loop {
        let nb = BigInt::from(n);
        t_lo = shr_floor(&(&t_lo * &r_lo), w2).div_floor(&nb);
        t_hi = div_ceil(&shr_ceil(&(&t_hi * &r_hi), w2), &nb);
        sum_lo += &t_lo;
        sum_hi += &t_hi;
        if t_hi <= BigInt::one() {
            break;
        }
        n += 1;
    }
    // With r < 1/256 the tail after term n is below that term.
    sum_hi += &t_hi;
    for _ in 0..s {
        sum_lo = shr_floor(&(&sum_lo * &sum_lo), w2);
        sum_hi = shr_ceil(&(&sum_hi * &sum_hi), w2);
    }
    (shr_floor(&sum_lo, w2 - w), shr_ceil(&sum_hi, w2 - w))
}

/// Bounds on `exp(x)` at scale `w`.
pub(crate) fn exp_point(x: &Dyadic, w: u64) -> (BigInt, BigInt) {
    if !x.is_negative() {
        return exp_nonneg(x, w);
    }
    let neg = -x;
    let guard = w + 16;
    let (lo, hi) = exp_nonneg(&neg, guard);
    let num = pow2(2 * guard);
    let r_lo = num.div_floor(&hi);
    let r_hi = div_ceil(&num, &lo);
    (shr_floor(&r_lo, guard - w), shr_ceil(&r_hi, guard - w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_f64(x: &BigInt, w: u64) -> f64 {
        Dyadic::new(x.clone(), -(w as i64)).to_f64()
    }

    #[test]
    fn ln2_brackets() {
        let (lo, hi) = ln2(80);
        assert!(lo <= hi);
        assert!(to_f64(&lo, 80) <= std::f64::consts::LN_2 + 1e-15);
        assert!(to_f64(&hi, 80) >= std::f64::consts::LN_2 - 1e-15);
        assert!(&hi - &lo < BigInt::from(64));
    }

    #[test]
    fn ln_point_matches_f64() {
        for (m, e) in [(3i64, 0i64), (5, -3), (1, 10), (7, -20), (1, 0)] {
            let x = Dyadic::new(BigInt::from(m), e);
            let (lo, hi) = ln_point(&x, 70);
            let v = (m as f64 * 2f64.powi(e as i32)).ln();
            assert!((to_f64(&lo, 70) - v).abs() < 1e-12, "{m} {e}");
            assert!(lo <= hi);
        }
    }

    #[test]
    fn exp_point_matches_f64() {
        for (m, e) in [(1i64, 0i64), (-1, 0), (3, -2), (-7, -1), (5, 1)] {
            let x = Dyadic::new(BigInt::from(m), e);
            let (lo, hi) = exp_point(&x, 70);
            let v = (m as f64 * 2f64.powi(e as i32)).exp();
            assert!((to_f64(&lo, 70) / v - 1.0).abs() < 1e-12, "{m} {e}");
            assert!(lo <= hi);
        }
    }

    #[test]
    fn sqrt_bounds_exact_square() {
        let x = Dyadic::from_int(49);
        assert_eq!(sqrt_floor(&x, 10), BigInt::from(7 << 10));
        assert_eq!(sqrt_ceil(&x, 10), BigInt::from(7 << 10));
    }
}
