use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::fixed;
use super::Fraction;
use crate::error::{Error, Result};

/// Significant bits kept in a radius. Radii are always rounded up.
const RAD_BITS: u32 = 30;
/// Extra fixed-point bits used inside transcendental kernels.
const GUARD_BITS: i64 = 32;

/// A real number enclosure `[mid - rad, mid + rad]` with dyadic endpoints.
///
/// Every operation rounds outward: the exact result of applying the
/// operation to any pair of points from the inputs lies inside the output.
#[derive(Clone, Debug)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl RealBall {
    /// Build from an exact midpoint and radius, rounding the midpoint to
    /// `prec` significant bits and inflating the radius to compensate.
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        let rounded = mid.round_floor(prec.max(2));
        let err = &mid - &rounded;
        let rad = (&rad + &err).round_ceil(RAD_BITS);
        RealBall {
            mid: rounded,
            rad,
            prec,
        }
    }

    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        RealBall::new(mid, Dyadic::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        RealBall::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        RealBall::from_int(1, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        RealBall::exact(Dyadic::from_int(n), prec)
    }

    /// Enclosure of an exact rational; exact when the denominator is a power of two.
    pub fn from_fraction(r: &Fraction, prec: u32) -> Self {
        let den = r.denom();
        if (den & (den - BigInt::one())).is_zero() {
            let k = den.bits() as i64 - 1;
            return RealBall::exact(Dyadic::new(r.numer().clone(), -k), prec);
        }
        let w = prec as i64 + den.bits() as i64 - r.numer().bits() as i64 + 4;
        let lo = fixed::div_scaled_floor(r.numer(), den, w);
        let hi = &lo + 1;
        RealBall::from_bounds(Dyadic::new(lo, -w), Dyadic::new(hi, -w), prec)
    }

    /// Smallest ball containing `[lo, hi]`.
    pub fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted bounds");
        let mid = (&lo + &hi).mul_pow2(-1);
        let rad = (&hi - &lo).mul_pow2(-1);
        RealBall::new(mid, rad, prec)
    }

    fn from_fixed(lo: BigInt, hi: BigInt, w: i64, prec: u32) -> Self {
        RealBall::from_bounds(Dyadic::new(lo, -w), Dyadic::new(hi, -w), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> Dyadic {
        &self.mid - &self.rad
    }

    pub fn upper(&self) -> Dyadic {
        &self.mid + &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// Same value re-tagged with a different working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        RealBall::new(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_fraction(&self, r: &Fraction) -> bool {
        self.lower().cmp_fraction(r) != Ordering::Greater
            && self.upper().cmp_fraction(r) != Ordering::Less
    }

    pub fn contains_ball(&self, other: &RealBall) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &RealBall) -> bool {
        self.upper() < other.lower()
    }

    pub fn certainly_gt(&self, other: &RealBall) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lower().is_positive_strict()
    }

    /// Decided ordering of the enclosed values, if the balls allow one.
    /// Two exact balls with identical midpoints compare `Equal`.
    pub fn compare(&self, other: &RealBall) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if self.certainly_gt(other) {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Ball whose interval is the convex hull of both inputs.
    pub fn hull(&self, other: &RealBall) -> RealBall {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        RealBall::from_bounds(lo, hi, self.prec.max(other.prec))
    }

    /// Enclosure of `min(x, y)` over `x` in `self`, `y` in `other`.
    pub fn min(&self, other: &RealBall) -> RealBall {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().min(other.upper());
        RealBall::from_bounds(lo, hi, self.prec.max(other.prec))
    }

    /// Enclosure of `max(x, y)`.
    pub fn max(&self, other: &RealBall) -> RealBall {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().max(other.upper());
        RealBall::from_bounds(lo, hi, self.prec.max(other.prec))
    }

    pub fn abs_upper(&self) -> Dyadic {
        self.lower().abs().max(self.upper().abs())
    }

    pub fn mul_int(&self, k: &BigInt) -> RealBall {
        let kd = Dyadic::from_int(k.clone());
        RealBall::new(&self.mid * &kd, &self.rad * &kd.abs(), self.prec)
    }

    pub fn div_int(&self, k: &BigInt) -> Result<RealBall> {
        self.div(&RealBall::from_int(k.clone(), self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> RealBall {
        RealBall::new(self.mid.mul_pow2(k), self.rad.mul_pow2(k), self.prec)
    }

    /// Enclosure of `1/x`; fails when the ball touches zero.
    pub fn recip(&self) -> Result<RealBall> {
        let lo = self.lower();
        let hi = self.upper();
        if !lo.is_positive_strict() && !hi.is_negative() {
            return Err(Error::Domain("reciprocal of a ball containing 0".into()));
        }
        if hi.is_negative() {
            return Ok(-&(-self).recip()?);
        }
        let frac_hi = hi.to_fraction();
        let frac_lo = lo.to_fraction();
        let w = self.prec as i64 + GUARD_BITS + lo.magnitude().max(0) - lo.magnitude().min(0);
        // 1/hi <= 1/x <= 1/lo
        let r_lo = fixed::div_scaled_floor(frac_hi.denom(), frac_hi.numer(), w);
        let r_hi = fixed::div_scaled_ceil(frac_lo.denom(), frac_lo.numer(), w);
        Ok(RealBall::from_fixed(r_lo, r_hi, w, self.prec))
    }

    pub fn div(&self, other: &RealBall) -> Result<RealBall> {
        Ok(self * &other.recip()?)
    }

    pub fn ln(&self) -> Result<RealBall> {
        ball_ln(self)
    }

    pub fn sqrt(&self) -> Result<RealBall> {
        ball_sqrt(self)
    }

    pub fn exp(&self) -> RealBall {
        ball_exp(self)
    }

    /// True when the radius is at most `2^-bits`.
    pub fn rad_at_most_pow2(&self, bits: u32) -> bool {
        self.rad <= Dyadic::new(BigInt::one(), -(bits as i64))
    }
}

trait StrictSign {
    fn is_positive_strict(&self) -> bool;
}

impl StrictSign for Dyadic {
    fn is_positive_strict(&self) -> bool {
        self.mantissa().is_positive()
    }
}

/// Enclosure of the natural logarithm.
pub fn ball_ln(x: &RealBall) -> Result<RealBall> {
    let lo = x.lower();
    if !lo.is_positive_strict() {
        return Err(Error::Domain(format!(
            "logarithm of a ball reaching {:.6e}",
            lo.to_f64()
        )));
    }
    if x.is_exact() && x.mid == Dyadic::from_int(1) {
        return Ok(RealBall::zero(x.prec));
    }
    let hi = x.upper();
    let mag = hi.magnitude().unsigned_abs().max(lo.magnitude().unsigned_abs());
    let w = x.prec as u64 + GUARD_BITS as u64 + (64 - mag.leading_zeros() as u64);
    let (l, _) = fixed::ln_point(&lo, w);
    let (_, h) = fixed::ln_point(&hi, w);
    Ok(RealBall::from_fixed(l, h, w as i64, x.prec))
}

/// Enclosure of the square root.
pub fn ball_sqrt(x: &RealBall) -> Result<RealBall> {
    let lo = x.lower();
    if lo.is_negative() {
        return Err(Error::Domain(format!(
            "square root of a ball reaching {:.6e}",
            lo.to_f64()
        )));
    }
    let hi = x.upper();
    if hi.is_zero() {
        return Ok(RealBall::zero(x.prec));
    }
    let w = x.prec as i64 + GUARD_BITS - hi.magnitude() / 2;
    let l = fixed::sqrt_floor(&lo, w);
    let h = fixed::sqrt_ceil(&hi, w);
    Ok(RealBall::from_fixed(l, h, w, x.prec))
}

/// Enclosure of the exponential.
pub fn ball_exp(x: &RealBall) -> RealBall {
    if x.is_exact() && x.mid.is_zero() {
        return RealBall::one(x.prec);
    }
    let lo = x.lower();
    let hi = x.upper();
    // Scale so that the result keeps about `prec` significant bits.
    let approx_log2 = (lo.to_f64() * std::f64::consts::LOG2_E).floor();
    let shift = if approx_log2.is_finite() && approx_log2 < 0.0 {
        (-approx_log2) as u64
    } else {
        0
    };
    let w = x.prec as u64 + GUARD_BITS as u64 + shift;
    let (l, _) = fixed::exp_point(&lo, w);
    let (_, h) = fixed::exp_point(&hi, w);
    RealBall::from_fixed(l, h, w as i64, x.prec)
}

impl std::ops::Add for &RealBall {
    type Output = RealBall;
    fn add(self, rhs: &RealBall) -> RealBall {
        RealBall::new(
            &self.mid + &rhs.mid,
            &self.rad + &rhs.rad,
            self.prec.max(rhs.prec),
        )
    }
}

impl std::ops::Sub for &RealBall {
    type Output = RealBall;
    fn sub(self, rhs: &RealBall) -> RealBall {
        RealBall::new(
            &self.mid - &rhs.mid,
            &self.rad + &rhs.rad,
            self.prec.max(rhs.prec),
        )
    }
}

impl std::ops::Mul for &RealBall {
    type Output = RealBall;
    fn mul(self, rhs: &RealBall) -> RealBall {
        let mid = &self.mid * &rhs.mid;
        let rad = &(&(&self.mid.abs() * &rhs.rad) + &(&rhs.mid.abs() * &self.rad))
            + &(&self.rad * &rhs.rad);
        RealBall::new(mid, rad, self.prec.max(rhs.prec))
    }
}

impl std::ops::Neg for &RealBall {
    type Output = RealBall;
    fn neg(self) -> RealBall {
        RealBall {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {:.3e}", self.decimal_mid(40), self.rad_f64())
    }
}

impl RealBall {
    /// Midpoint printed to `digits` decimal places (rounded half to even).
    pub fn decimal_mid(&self, digits: usize) -> String {
        super::decimal::signed_fraction_to_decimal(&self.mid.to_fraction(), digits)
    }

    /// Printable `(mid, rad)` where the printed radius also covers the
    /// rounding of the printed midpoint.
    pub fn to_decimal_parts(&self, digits: usize) -> (String, String) {
        let mid = self.decimal_mid(digits);
        let ten: BigInt = num_traits::Pow::pow(BigInt::from(10), digits);
        let slack = Fraction::new(BigInt::one(), ten * 2);
        let rad = self.rad.to_fraction() + slack;
        (mid, super::decimal::fraction_to_sci_up(&rad, 3))
    }
}
