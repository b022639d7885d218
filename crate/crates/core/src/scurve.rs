//! The growth curve `S(p/q) = ln rho(product(x)) / q` over periods `x` of
//! balanced words with one-ratio `p/q`, and the maximiser of
//! `S(gamma) + gamma ln(alpha)` over Farey fractions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{Fraction, PrecisionPolicy, RealBall, TargetRad};
use crate::error::{Error, Result};
use crate::mat::{log_rho_from_trace, word_product};
use crate::words::mechanical_periodic;

/// `S` at a rational point.
#[derive(Clone, Debug)]
pub struct SPoint {
    pub gamma: Fraction,
    /// Trace of the period product; cyclic shifts share it.
    pub trace: BigInt,
    pub value: RealBall,
}

/// Exact trace of the product along one period of slope `p/q`.
pub fn period_trace(p: u64, q: u64) -> Result<BigInt> {
    Ok(word_product(&mechanical_periodic(p, q, 0)?).trace())
}

fn s_from_trace(t: &BigInt, q: u64, prec: u32) -> Result<RealBall> {
    let l = log_rho_from_trace(t, prec)?;
    if q == 1 || l.is_exact() && l.mid().is_zero() {
        return Ok(l);
    }
    l.div_int(&BigInt::from(q))
}

pub fn s_of(p: u64, q: u64, target: TargetRad) -> Result<SPoint> {
    s_of_with(p, q, target, &PrecisionPolicy::default())
}

pub fn s_of_with(p: u64, q: u64, target: TargetRad, policy: &PrecisionPolicy) -> Result<SPoint> {
    let trace = period_trace(p, q)?;
    let value = policy.certify(target, |prec| s_from_trace(&trace, q, prec))?;
    Ok(SPoint {
        gamma: Fraction::new(p.into(), q.into()),
        trace,
        value,
    })
}

/// All reduced `p/q` in `[0, 1]` with `q <= Q`, ascending.
pub fn farey_fractions(big_q: u64) -> Vec<Fraction> {
    farey_pairs(big_q)
        .into_iter()
        .map(|(p, q)| Fraction::new(p.into(), q.into()))
        .collect()
}

/// [`farey_fractions`] as `(p, q)` pairs.
pub fn farey_pairs(big_q: u64) -> Vec<(u64, u64)> {
    if big_q == 0 {
        return Vec::new();
    }
    let mut out = vec![(0, 1)];
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, big_q);
    while c <= d {
        out.push((c, d));
        let k = (big_q + b) / d;
        let next = (k * c - a, k * d - b);
        a = c;
        b = d;
        c = next.0;
        d = next.1;
    }
    out
}

/// Result of maximising `S(gamma) + gamma ln(alpha)` over Farey fractions.
#[derive(Clone, Debug)]
pub struct RArgmax {
    pub alpha: RealBall,
    pub best: Fraction,
    /// Neighbours of `best` among Farey fractions of the search bound.
    pub bracket: (Fraction, Fraction),
    /// Stern-Brocot descent steps taken.
    pub depth: usize,
    /// Enclosure of the maximum value.
    pub value: RealBall,
}

type Pq = (u64, u64);

fn frac(x: Pq) -> Fraction {
    Fraction::new(x.0.into(), x.1.into())
}

/// Objective evaluator with cached traces.
struct Objective<'a> {
    ln_alpha: &'a (dyn Fn(u32) -> Result<RealBall> + Sync),
    traces: Mutex<HashMap<Pq, BigInt>>,
}

impl<'a> Objective<'a> {
    fn new(ln_alpha: &'a (dyn Fn(u32) -> Result<RealBall> + Sync)) -> Self {
        Objective {
            ln_alpha,
            traces: Mutex::new(HashMap::new()),
        }
    }

    fn trace(&self, x: Pq) -> Result<BigInt> {
        if let Some(t) = self.traces.lock().map_err(poisoned)?.get(&x) {
            return Ok(t.clone());
        }
        let t = period_trace(x.0, x.1)?;
        self.traces.lock().map_err(poisoned)?.insert(x, t.clone());
        Ok(t)
    }

    fn s(&self, x: Pq, prec: u32) -> Result<RealBall> {
        s_from_trace(&self.trace(x)?, x.1, prec)
    }

    fn value(&self, x: Pq, prec: u32) -> Result<RealBall> {
        let tilt = (self.ln_alpha)(prec)?
            .mul_int(&BigInt::from(x.0))
            .div_int(&BigInt::from(x.1))?;
        Ok(&self.s(x, prec)? + &tilt)
    }

    /// Ordering of `f(x)` against `f(y)`; `None` if the balls cannot decide.
    fn compare(&self, x: Pq, y: Pq, prec: u32) -> Result<Option<Ordering>> {
        if x == y {
            return Ok(Some(Ordering::Equal));
        }
        let ds = &self.s(x, prec)? - &self.s(y, prec)?;
        let dg = frac(x) - frac(y);
        let ln_alpha = (self.ln_alpha)(prec)?;
        let tilt = if ln_alpha.is_exact() && ln_alpha.mid().is_zero() {
            RealBall::zero(prec)
        } else {
            ln_alpha.mul_int(dg.numer()).div_int(dg.denom())?
        };
        let diff = &ds + &tilt;
        if diff.is_exact() {
            return Ok(Some(diff.mid().sign_ordering()));
        }
        Ok(diff.compare(&RealBall::zero(prec)))
    }

    /// Whether `x` beats `y`, with exact ties going to the smaller
    /// denominator and then the smaller value.
    fn beats(&self, x: Pq, y: Pq, prec: u32) -> Result<Option<bool>> {
        Ok(self.compare(x, y, prec)?.map(|o| match o {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (x.1, frac(x)) < (y.1, frac(y)),
        }))
    }
}

fn poisoned<T>(_: T) -> Error {
    Error::Internal("trace cache lock poisoned".into())
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for crate::arith::Dyadic {
    fn sign_ordering(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// Largest `k` with `den(base) + k den(m) <= Q`, as the fraction `base + k m`.
fn farey_neighbour(base: Pq, m: Pq, big_q: u64) -> Pq {
    let k = (big_q - base.1) / m.1;
    (base.0 + k * m.0, base.1 + k * m.1)
}

struct Descent {
    best: Pq,
    bracket: (Pq, Pq),
    depth: usize,
}

/// Stern-Brocot descent. The objective is concave in `gamma`, so a Farey
/// fraction that beats both of its Farey neighbours is the maximiser.
fn descend(obj: &Objective, big_q: u64, prec: u32) -> Result<Option<Descent>> {
    let (mut l, mut r): (Pq, Pq) = ((0, 1), (1, 1));
    let mut depth = 0;
    loop {
        let m = (l.0 + r.0, l.1 + r.1);
        if m.1 > big_q {
            let Some(l_wins) = obj.beats(l, r, prec)? else {
                return Ok(None);
            };
            let best = if l_wins { l } else { r };
            return Ok(Some(Descent {
                best,
                bracket: (l, r),
                depth,
            }));
        }
        depth += 1;
        let left = farey_neighbour(l, m, big_q);
        let right = farey_neighbour(r, m, big_q);
        let Some(left_wins) = obj.beats(left, m, prec)? else {
            return Ok(None);
        };
        if left_wins {
            r = m;
            continue;
        }
        let Some(right_wins) = obj.beats(right, m, prec)? else {
            return Ok(None);
        };
        if right_wins {
            l = m;
            continue;
        }
        return Ok(Some(Descent {
            best: m,
            bracket: (left, right),
            depth,
        }));
    }
}

fn check_search(big_q: u64) -> Result<()> {
    if big_q < 1 {
        return Err(Error::Parameter("search bound Q must be at least 1".into()));
    }
    Ok(())
}

fn check_alpha(alpha: &RealBall) -> Result<()> {
    if !alpha.certainly_positive() || alpha.upper() > crate::arith::Dyadic::from_int(1) {
        return Err(Error::Parameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Maximiser over Farey fractions for an `alpha` given as a ball of fixed
/// width. A ball that is too wide to separate candidates is reported as
/// indeterminate.
pub fn argmax_r(alpha: &RealBall, big_q: u64, target: TargetRad) -> Result<RArgmax> {
    argmax_r_with(alpha, big_q, target, &PrecisionPolicy::default())
}

pub fn argmax_r_with(
    alpha: &RealBall,
    big_q: u64,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<RArgmax> {
    check_alpha(alpha)?;
    let a = alpha.clone();
    let ln_alpha = move |prec: u32| a.with_prec(prec.max(a.prec())).ln();
    search(alpha.clone(), &ln_alpha, big_q, target, policy)
}

/// Maximiser for an exact rational `alpha`, re-enclosed at each precision.
pub fn argmax_r_exact(alpha: &Fraction, big_q: u64, target: TargetRad) -> Result<RArgmax> {
    argmax_r_exact_with(alpha, big_q, target, &PrecisionPolicy::default())
}

pub fn argmax_r_exact_with(
    alpha: &Fraction,
    big_q: u64,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<RArgmax> {
    let ball = RealBall::from_fraction(alpha, policy.start_bits);
    check_alpha(&ball)?;
    let a = alpha.clone();
    let ln_alpha = move |prec: u32| RealBall::from_fraction(&a, prec).ln();
    search(ball, &ln_alpha, big_q, target, policy)
}

fn search(
    alpha: RealBall,
    ln_alpha: &(dyn Fn(u32) -> Result<RealBall> + Sync),
    big_q: u64,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<RArgmax> {
    check_search(big_q)?;
    let obj = Objective::new(ln_alpha);
    let d = policy.decide("argmax comparison", |prec| descend(&obj, big_q, prec))?;
    let value = policy.certify(target, |prec| obj.value(d.best, prec))?;
    Ok(RArgmax {
        alpha,
        best: frac(d.best),
        bracket: (frac(d.bracket.0), frac(d.bracket.1)),
        depth: d.depth,
        value,
    })
}

/// Exhaustive maximiser over every Farey fraction, with the same tie rule.
/// Used as an oracle for the descent.
pub fn argmax_r_sweep(alpha: &Fraction, big_q: u64, policy: &PrecisionPolicy) -> Result<Fraction> {
    check_search(big_q)?;
    let a = alpha.clone();
    let ln_alpha = move |prec: u32| RealBall::from_fraction(&a, prec).ln();
    let obj = Objective::new(&ln_alpha);
    let pairs = farey_pairs(big_q);
    let best = policy.decide("argmax sweep", |prec| {
        let mut best = pairs[0];
        for &x in &pairs[1..] {
            match obj.beats(x, best, prec)? {
                Some(true) => best = x,
                Some(false) => {}
                None => return Ok(None),
            }
        }
        Ok(Some(best))
    })?;
    Ok(frac(best))
}

/// `exp(max_gamma S(gamma) + gamma ln alpha)`: a lower bound for the joint
/// spectral radius of `{A0, alpha A1}`.
pub fn rho_lower(alpha: &RealBall, big_q: u64, target: TargetRad) -> Result<RealBall> {
    Ok(argmax_r(alpha, big_q, target)?.value.exp())
}

pub fn rho_lower_exact(alpha: &Fraction, big_q: u64, target: TargetRad) -> Result<RealBall> {
    Ok(argmax_r_exact(alpha, big_q, target)?.value.exp())
}

/// One row per Farey fraction with denominator at most `Q`.
pub fn scurve_table(big_q: u64, target: TargetRad) -> Result<Vec<SPoint>> {
    scurve_table_with(big_q, target, &PrecisionPolicy::default())
}

pub fn scurve_table_with(big_q: u64, target: TargetRad, policy: &PrecisionPolicy) -> Result<Vec<SPoint>> {
    farey_pairs(big_q)
        .into_par_iter()
        .map(|(p, q)| s_of_with(p, q, target, policy))
        .collect()
}

/// Maximiser for each grid value of `alpha`.
pub fn rcurve_table(grid: &[Fraction], big_q: u64, target: TargetRad) -> Result<Vec<RArgmax>> {
    rcurve_table_with(grid, big_q, target, &PrecisionPolicy::default())
}

pub fn rcurve_table_with(
    grid: &[Fraction],
    big_q: u64,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<Vec<RArgmax>> {
    grid.par_iter()
        .map(|a| argmax_r_exact_with(a, big_q, target, policy))
        .collect()
}

/// `count` evenly spaced exact fractions from `start` to `stop` inclusive.
pub fn fraction_grid(start: &Fraction, stop: &Fraction, count: usize) -> Result<Vec<Fraction>> {
    match count {
        0 => Err(Error::Parameter("grid needs at least one point".into())),
        1 => Ok(vec![start.clone()]),
        _ => {
            let step = (stop - start) / Fraction::from_integer(BigInt::from(count - 1));
            Ok((0..count)
                .map(|i| start + &step * Fraction::from_integer(BigInt::from(i)))
                .collect())
        }
    }
}

/// Number of Farey fractions of order `Q`, `1 + sum_{q <= Q} phi(q)`.
pub fn farey_len(big_q: u64) -> u64 {
    1 + (1..=big_q)
        .map(|q| (1..=q).filter(|p| p.gcd(&q) == 1).count() as u64)
        .sum::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n.into(), d.into())
    }

    #[test]
    fn farey_small_orders() {
        assert_eq!(farey_fractions(2), vec![f(0, 1), f(1, 2), f(1, 1)]);
        assert_eq!(
            farey_fractions(3),
            vec![f(0, 1), f(1, 3), f(1, 2), f(2, 3), f(1, 1)]
        );
        assert_eq!(farey_fractions(5).len(), 11);
        assert_eq!(farey_len(5), 11);
    }

    #[test]
    fn endpoints_are_exact_zero() {
        for (p, q) in [(0, 1), (1, 1)] {
            let s = s_of(p, q, TargetRad::bits(80)).unwrap();
            assert!(s.value.is_exact() && s.value.mid().is_zero());
        }
        assert!(s_of(2, 4, TargetRad::bits(80)).is_err());
    }

    #[test]
    fn traces_of_small_periods() {
        assert_eq!(period_trace(2, 5).unwrap(), BigInt::from(10));
        assert_eq!(period_trace(1, 3).unwrap(), BigInt::from(4));
        assert_eq!(period_trace(1, 2).unwrap(), BigInt::from(3));
    }

    #[test]
    fn argmax_at_one_is_one_half() {
        let r = argmax_r_exact(&f(1, 1), 10, TargetRad::bits(60)).unwrap();
        assert_eq!(r.best, f(1, 2));
        let r1 = argmax_r_exact(&f(1, 1), 1, TargetRad::bits(60)).unwrap();
        assert_eq!(r1.best, f(0, 1));
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(argmax_r_exact(&f(3, 2), 10, TargetRad::bits(60)).is_err());
        assert!(argmax_r_exact(&f(0, 1), 10, TargetRad::bits(60)).is_err());
    }

    #[test]
    fn grid_is_exact() {
        let g = fraction_grid(&f(1, 2), &f(1, 1), 3).unwrap();
        assert_eq!(g, vec![f(1, 2), f(3, 4), f(1, 1)]);
    }
}
