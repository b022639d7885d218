//! The critical parameter `alpha*`.
//!
//! With `tau_0 = 1`, `tau_1 = tau_2 = 2` and
//! `tau_{n+1} = tau_n tau_{n-1} - tau_{n-2}`, the approximants
//! `alpha_n = (tau_n^{F_{n+1}} / tau_{n+1}^{F_n})^{(-1)^n}` converge to
//! `alpha*` doubly exponentially. Approximants are kept as exact
//! [`PowerProduct`]s; decimal digits are produced from a certified enclosure
//! of `alpha_N` widened by the proven truncation error.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{
    round_scaled_half_even, signed_fraction_to_decimal, Fraction, PowerProduct,
    PrecisionPolicy, RealBall, TargetRad,
};
use crate::error::{Error, Result};
use crate::mat::ExactMat2;

/// Default cap on requested digits.
pub const DEFAULT_MAX_DIGITS: usize = 1000;

/// Bound on `alpha` used to pass from the logarithmic to the absolute error.
const ALPHA_CAP: (i64, i64) = (11, 10);

/// `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: usize) -> Result<u64> {
    if n > 93 {
        return Err(Error::Parameter(format!("F_{n} does not fit in 64 bits")));
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    Ok(a)
}

fn fib_i64(n: usize) -> Result<i64> {
    let f = fibonacci(n)?;
    i64::try_from(f).map_err(|_| Error::Parameter(format!("F_{n} exceeds i64")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSequence {
    values: Vec<BigInt>,
}

impl TauSequence {
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `tau_0 ..= tau_N`.
pub fn tau(n: usize) -> TauSequence {
    let mut values: Vec<BigInt> = vec![1.into(), 2.into(), 2.into()];
    while values.len() <= n {
        let k = values.len();
        let next = &values[k - 1] * &values[k - 2] - &values[k - 3];
        values.push(next);
    }
    values.truncate(n + 1);
    TauSequence { values }
}

/// `B_1 = A1`, `B_2 = A0`, `B_{n+1} = B_n B_{n-1}`.
pub fn b_matrix(n: usize) -> Result<ExactMat2> {
    if n == 0 {
        return Err(Error::Parameter("B_n is indexed from 1".into()));
    }
    let mut prev = ExactMat2::a1();
    if n == 1 {
        return Ok(prev);
    }
    let mut cur = ExactMat2::a0();
    for _ in 2..n {
        let next = cur.mul(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `tr B_1 ..= tr B_n` from one pass over the products. The last trace is
/// taken as `tr(B_{n-1} B_{n-2})` without forming `B_n`.
pub fn b_matrix_traces(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let mut prev = ExactMat2::a1();
    out.push(prev.trace());
    if n == 1 {
        return out;
    }
    let mut cur = ExactMat2::a0();
    out.push(cur.trace());
    for k in 3..=n {
        if k == n {
            out.push(&cur.a * &prev.a + &cur.b * &prev.c + &cur.c * &prev.b + &cur.d * &prev.d);
            break;
        }
        let next = cur.mul(&prev);
        out.push(next.trace());
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

fn sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `alpha_n` as an exact product of powers.
pub fn alpha_n_factored(n: usize) -> Result<PowerProduct> {
    if n == 0 {
        return Err(Error::Parameter("alpha_n is indexed from 1".into()));
    }
    let t = tau(n + 1);
    let s = sign(n);
    let num = PowerProduct::power(t.values[n].clone(), fib_i64(n + 1)? * s)?;
    let den = PowerProduct::power(t.values[n + 1].clone(), -fib_i64(n)? * s)?;
    Ok(num.mul(&den))
}

/// `alpha_n` expanded to a reduced fraction. The size grows like
/// `F_n * log(tau_{n+1})`, so this is practical up to about `n = 17`.
pub fn alpha_n(n: usize) -> Result<Fraction> {
    Ok(alpha_n_factored(n)?.to_fraction())
}

/// `prod_{n=1}^{N-1} (1 - tau_{n-1} / (tau_n tau_{n+1}))^{(-1)^n F_{n+1}}`.
pub fn partial_product_factored(big_n: usize) -> Result<PowerProduct> {
    if big_n == 0 {
        return Err(Error::Parameter("partial product needs N >= 1".into()));
    }
    let t = tau(big_n + 1);
    let mut acc = PowerProduct::one();
    for n in 1..big_n {
        let top = &t.values[n] * &t.values[n + 1];
        let factor = PowerProduct::ratio(&top - &t.values[n - 1], top)?;
        acc = acc.mul(&factor.pow(sign(n) * fib_i64(n + 1)?));
    }
    Ok(acc)
}

pub fn partial_product(big_n: usize) -> Result<Fraction> {
    Ok(partial_product_factored(big_n)?.to_fraction())
}

fn phi_ball(prec: u32) -> Result<RealBall> {
    let root5 = RealBall::from_int(5, prec).sqrt()?;
    Ok((&root5 + &RealBall::one(prec)).mul_pow2(-1))
}

/// `log10` of `1.1 * 780 * (3/4)^{phi^N}`.
fn log10_error_bound(big_n: usize, prec: u32) -> Result<RealBall> {
    let phi = phi_ball(prec)?;
    let mut phi_n = RealBall::one(prec);
    for _ in 0..big_n {
        phi_n = &phi_n * &phi;
    }
    let three_quarters = RealBall::from_fraction(&Fraction::new(3.into(), 4.into()), prec);
    let cap = Fraction::new(ALPHA_CAP.0.into(), ALPHA_CAP.1.into()) * Fraction::from_integer(780.into());
    let ln_bound = &RealBall::from_fraction(&cap, prec).ln()? + &(&phi_n * &three_quarters.ln()?);
    ln_bound.div(&RealBall::from_int(10, prec).ln()?)
}

/// Smallest integer `e` with `1.1 * 780 * (3/4)^{phi^N} < 10^e`, which bounds
/// `|alpha_N - alpha*|` for `N >= 3`.
pub fn error_bound_exponent(big_n: usize) -> Result<i64> {
    error_bound_exponent_with(big_n, &PrecisionPolicy::default())
}

pub fn error_bound_exponent_with(big_n: usize, policy: &PrecisionPolicy) -> Result<i64> {
    if big_n < 3 {
        return Err(Error::Parameter(format!(
            "the error bound holds for N >= 3, got {big_n}"
        )));
    }
    policy.decide("error-bound exponent", |prec| {
        let x = log10_error_bound(big_n, prec)?;
        let lo = x.lower().to_fraction().floor();
        let hi = x.upper().to_fraction();
        // Decided once the enclosure lies within [k, k+1) for an integer k.
        if hi < lo.clone() + Fraction::one() {
            let e = lo.to_integer() + BigInt::one();
            return Ok(Some(i64::try_from(e).map_err(|_| {
                Error::Internal("error exponent out of range".into())
            })?));
        }
        Ok(None)
    })
}

/// `(-1)^n (F_n ln tau_{n+1} - F_{n+1} ln tau_n)`, which equals `-ln alpha_n`.
pub fn slope_estimate(n: usize, target: TargetRad) -> Result<RealBall> {
    if n == 0 {
        return Err(Error::Parameter("slope estimate is indexed from 1".into()));
    }
    let t = tau(n + 1);
    let fn0 = BigInt::from(fibonacci(n)?);
    let fn1 = BigInt::from(fibonacci(n + 1)?);
    let s = BigInt::from(sign(n));
    PrecisionPolicy::default().certify(target, |prec| {
        let a = RealBall::from_int(t.values[n + 1].clone(), prec).ln()?.mul_int(&fn0);
        let b = RealBall::from_int(t.values[n].clone(), prec).ln()?.mul_int(&fn1);
        Ok((&a - &b).mul_int(&s))
    })
}

/// Enclosure of `alpha_n` from its factored form.
pub fn alpha_n_ball(n: usize, prec: u32) -> Result<RealBall> {
    let f = alpha_n_factored(n)?;
    let mut log = RealBall::zero(prec);
    for (base, e) in f.factors() {
        let l = RealBall::from_int(base.clone(), prec).ln()?;
        log = &log + &l.mul_int(&BigInt::from(*e));
    }
    Ok(log.exp())
}

/// A ball around `alpha*` itself: `alpha_N` widened by `10^e(N)`.
pub fn alpha_star_enclosure(big_n: usize, prec: u32) -> Result<RealBall> {
    let e = error_bound_exponent(big_n)?;
    let ball = alpha_n_ball(big_n, prec)?;
    let err = Fraction::new(BigInt::one(), num_traits::Pow::pow(BigInt::from(10), e.unsigned_abs()));
    let lo = RealBall::from_fraction(&(ball.lower().to_fraction() - &err), prec);
    let hi = RealBall::from_fraction(&(ball.upper().to_fraction() + &err), prec);
    Ok(lo.hull(&hi))
}

/// Certified decimal digits of `alpha*`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaCertificate {
    /// `alpha*` rounded half-to-even to `requested` fractional digits.
    pub digits: String,
    pub requested: usize,
    /// Index of the approximant used.
    pub n_used: usize,
    /// `|alpha_N - alpha*| < 10^error_exponent`.
    pub error_exponent: i64,
    /// `alpha_N`, exact.
    pub value: PowerProduct,
}

impl AlphaCertificate {
    pub fn value_fraction(&self) -> Fraction {
        self.value.to_fraction()
    }
}

pub fn alpha_star(digits: usize) -> Result<AlphaCertificate> {
    alpha_star_with(digits, DEFAULT_MAX_DIGITS, &PrecisionPolicy::default())
}

/// Chooses the least `N >= 3` whose error exponent is at most
/// `-(digits + 2)`, then rounds. If the enclosure of `alpha*` straddles a
/// rounding boundary, `N` is increased.
pub fn alpha_star_with(
    digits: usize,
    max_digits: usize,
    policy: &PrecisionPolicy,
) -> Result<AlphaCertificate> {
    if digits == 0 || digits > max_digits {
        return Err(Error::Parameter(format!(
            "digits must lie in 1..={max_digits}, got {digits}"
        )));
    }
    let need = -(digits as i64 + 2);
    let mut big_n = 3;
    while error_bound_exponent_with(big_n, policy)? > need {
        big_n += 1;
    }
    let cap = Fraction::new(ALPHA_CAP.0.into(), ALPHA_CAP.1.into());
    for n in big_n..big_n + 4 {
        let e = error_bound_exponent_with(n, policy)?;
        let err = Fraction::new(BigInt::one(), num_traits::Pow::pow(BigInt::from(10), e.unsigned_abs()));
        let bits = (digits as u32 + 10) * 10 / 3 + 64;
        let ball = policy
            .at_least(bits)
            .certify(TargetRad::decimal(digits as u32 + 8), |prec| alpha_n_ball(n, prec))?;
        if ball.upper().cmp_fraction(&cap).is_ge() {
            return Err(Error::Internal(format!("alpha_{n} is not below 1.1")));
        }
        let lo = ball.lower().to_fraction() - &err;
        let hi = ball.upper().to_fraction() + &err;
        let r_lo = round_scaled_half_even(&lo, digits);
        let r_hi = round_scaled_half_even(&hi, digits);
        if r_lo == r_hi {
            let scale = num_traits::Pow::pow(BigInt::from(10), digits);
            let text = signed_fraction_to_decimal(&Fraction::new(r_lo, scale), digits);
            return Ok(AlphaCertificate {
                digits: text,
                requested: digits,
                n_used: n,
                error_exponent: e,
                value: alpha_n_factored(n)?,
            });
        }
    }
    Err(Error::Internal(format!(
        "rounding to {digits} digits did not stabilise"
    )))
}
