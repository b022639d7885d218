mod common;

use common::{encloses, frac, ln_bounds, ln_phi_bounds, ln_rho_bounds, sqrt_bounds, trace_u128, word_bits};
use jsrlab::arith::{Fraction, PrecisionPolicy, RealBall, TargetRad};
use jsrlab::mat::word_product;
use jsrlab::scurve::{
    argmax_r, argmax_r_exact, argmax_r_sweep, farey_fractions, farey_len, period_trace,
    rcurve_table, rho_lower, rho_lower_exact, s_of, scurve_table,
};
use jsrlab::words::{mechanical_periodic, FiniteWord};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// Far finer than the library's working grid, so an outward-rounded ball
/// never ends inside the oracle interval.
const D: u32 = 90;

fn target() -> TargetRad {
    TargetRad::bits(110)
}

fn scaled(b: (Fraction, Fraction), q: i64) -> (Fraction, Fraction) {
    (b.0 / frac(q, 1), b.1 / frac(q, 1))
}

#[test]
fn s_examples() {
    let (lo, hi) = ln_phi_bounds(D);
    assert!(encloses(&s_of(1, 2, target()).unwrap().value, &lo, &hi));

    let zero = s_of(0, 1, target()).unwrap().value;
    assert!(zero.is_exact() && zero.mid().is_zero());
    let one = s_of(1, 1, target()).unwrap().value;
    assert!(one.is_exact() && one.mid().is_zero());

    // (4 + sqrt 12) / 2 = 2 + sqrt 3
    let third = s_of(1, 3, target()).unwrap();
    assert_eq!(third.trace, BigInt::from(4));
    let (lo, hi) = scaled(ln_rho_bounds(&BigInt::from(4), D), 3);
    assert!(encloses(&third.value, &lo, &hi));

    // (10 + sqrt 96) / 2 = 5 + 2 sqrt 6
    let two_fifths = s_of(2, 5, target()).unwrap();
    assert_eq!(two_fifths.trace, BigInt::from(10));
    let (lo, hi) = scaled(ln_rho_bounds(&BigInt::from(10), D), 5);
    assert!(encloses(&two_fifths.value, &lo, &hi));

    assert!(s_of(2, 4, target()).is_err());
    assert!(s_of(3, 2, target()).is_err());
}

#[test]
fn farey_examples() {
    assert_eq!(farey_fractions(2), vec![frac(0, 1), frac(1, 2), frac(1, 1)]);
    assert_eq!(
        farey_fractions(3),
        vec![frac(0, 1), frac(1, 3), frac(1, 2), frac(2, 3), frac(1, 1)]
    );
    assert_eq!(farey_fractions(5).len(), 11);
    for q in 1..40 {
        let f = farey_fractions(q);
        assert_eq!(f.len() as u64, farey_len(q));
        assert!(f.windows(2).all(|p| p[0] < p[1]));
    }
}

#[test]
fn argmax_examples() {
    let one = RealBall::one(128);
    assert_eq!(argmax_r(&one, 10, target()).unwrap().best, frac(1, 2));
    let r = argmax_r_exact(&frac(9, 10), 50, target()).unwrap();
    assert_eq!(r.best, frac(1, 2));
    assert!(r.bracket.0 < r.best && r.best < r.bracket.1);
    assert!(argmax_r(&RealBall::from_int(2, 64), 10, target()).is_err());
}

#[test]
fn rho_lower_examples() {
    let one = RealBall::one(128);
    let (s_lo, s_hi) = sqrt_bounds(&BigInt::from(5), D);
    let phi = ((frac(1, 1) + s_lo) / frac(2, 1), (frac(1, 1) + s_hi) / frac(2, 1));
    for q in [2, 3, 10] {
        let got = rho_lower(&one, q, target()).unwrap();
        assert!(encloses(&got, &phi.0, &phi.1));
    }

    // phi * sqrt(9/10) = sqrt(9 phi^2 / 10), with phi^2 = (3 + sqrt 5) / 2
    let got = rho_lower_exact(&frac(9, 10), 50, target()).unwrap();
    let sq = |x: &Fraction| (frac(3, 1) + x) * frac(9, 20);
    let digits = D;
    let lo = sq(&sqrt_bounds(&BigInt::from(5), digits + 5).0);
    let hi = sq(&sqrt_bounds(&BigInt::from(5), digits + 5).1);
    let root = |x: &Fraction, up: bool| {
        let s = pow10(digits);
        let n = (x * Fraction::from_integer(&s * &s)).to_integer().sqrt();
        Fraction::new(if up { n + 1 } else { n }, s)
    };
    assert!(encloses(&got, &root(&lo, false), &root(&hi, true)));
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

#[test]
fn rho_lower_at_order_one_is_one() {
    // Only 0 and 1 are available, where S vanishes.
    let v = rho_lower(&RealBall::one(128), 1, target()).unwrap();
    assert!(v.contains_fraction(&frac(1, 1)));
}

#[test]
fn table_examples() {
    let t = scurve_table(2, target()).unwrap();
    assert_eq!(t.len(), 3);
    let (lo, hi) = ln_phi_bounds(D);
    assert!(encloses(&t[1].value, &lo, &hi));

    let rows = scurve_table(40, target()).unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert!(!row.value.certainly_lt(&RealBall::zero(64)), "{}", row.gamma);
        assert!(row.value.lower().to_fraction() <= hi, "{}", row.gamma);
        let mirror = &rows[rows.len() - 1 - i];
        assert_eq!(&frac(1, 1) - &row.gamma, mirror.gamma);
        assert!(row.value.overlaps(&mirror.value), "{}", row.gamma);
    }
}

#[test]
fn rcurve_examples() {
    let one = rcurve_table(&[frac(1, 1)], 10, target()).unwrap();
    assert_eq!(one[0].best, frac(1, 2));
    let plateau = rcurve_table(&[frac(81, 100), frac(9, 10), frac(99, 100)], 50, target()).unwrap();
    assert!(plateau.iter().all(|r| r.best == frac(1, 2)));

    let grid: Vec<Fraction> = (1..=40).map(|k| frac(k, 40)).collect();
    let rows = rcurve_table(&grid, 30, target()).unwrap();
    assert!(rows.windows(2).all(|w| w[0].best <= w[1].best));
}

#[test]
fn symmetry_up_to_30() {
    for q in 1..=30u64 {
        for p in 0..=q {
            if p.gcd(&q) != 1 {
                continue;
            }
            assert_eq!(period_trace(p, q).unwrap(), period_trace(q - p, q).unwrap(), "{p}/{q}");
            let a = s_of(p, q, target()).unwrap().value;
            let b = s_of(q - p, q, target()).unwrap().value;
            assert!(a.overlaps(&b), "{p}/{q}");
        }
    }
}

#[test]
fn values_stay_in_range() {
    let (_, hi) = ln_phi_bounds(D);
    for q in 1..=40u64 {
        for p in (0..=q).filter(|p| p.gcd(&q) == 1) {
            let v = s_of(p, q, target()).unwrap().value;
            assert!(!v.certainly_lt(&RealBall::zero(64)), "{p}/{q}");
            assert!(v.lower().to_fraction() <= hi, "{p}/{q}");
        }
    }
}

#[test]
fn midpoint_concavity() {
    let fr = farey_fractions(12);
    for (i, a) in fr.iter().enumerate() {
        for b in &fr[i + 1..] {
            let m = (a + b) / frac(2, 1);
            if *m.denom() > BigInt::from(60) {
                continue;
            }
            let s = |x: &Fraction| {
                let (p, q) = (x.numer().try_into().unwrap(), x.denom().try_into().unwrap());
                s_of(p, q, target()).unwrap().value
            };
            let mean = (&s(a) + &s(b)).mul_pow2(-1);
            assert!(!s(&m).certainly_lt(&mean), "{a} {b}");
        }
    }
}

#[test]
fn upper_envelope_at_unit_fractions() {
    for n in 1..=30u64 {
        let p = s_of(1, n + 1, target()).unwrap();
        let zeros_one = word_product(&FiniteWord::repeat(0, n as usize).concat(&FiniteWord::repeat(1, 1)));
        assert_eq!(zeros_one.trace(), BigInt::from(n + 2));
        assert_eq!(p.trace, BigInt::from(n + 2));
        let (_, hi) = ln_bounds(&frac(n as i64 + 2, 1), D);
        let bound = hi / frac(n as i64 + 1, 1);
        assert!(p.value.lower().to_fraction() <= bound, "n = {n}");
    }
}

#[test]
fn mechanical_words_maximise_the_trace() {
    // rho is increasing in the trace, so comparing traces compares spectral radii.
    for q in 1..=12usize {
        let mut best = vec![0u128; q + 1];
        for code in 0..(1u64 << q) {
            let bits = word_bits(code, q);
            let p = bits.iter().filter(|&&b| b == 1).count();
            best[p] = best[p].max(trace_u128(&bits));
        }
        for (p, &t) in best.iter().enumerate() {
            let d = p.gcd(&q).max(1);
            let (pp, qq) = ((p / d) as u64, (q / d) as u64);
            let period = mechanical_periodic(pp, qq, 0).unwrap().pow(d);
            assert_eq!(word_product(&period).trace(), BigInt::from(t), "{p}/{q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn descent_agrees_with_sweep(num in 1i64..=1000, big_q in 2u64..=60) {
        let alpha = frac(num, 1000);
        let fast = argmax_r_exact(&alpha, big_q, TargetRad::bits(40)).unwrap();
        let slow = argmax_r_sweep(&alpha, big_q, &PrecisionPolicy::default()).unwrap();
        prop_assert_eq!(fast.best, slow);
    }
}
