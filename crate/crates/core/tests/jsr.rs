mod common;

use common::{encloses, frac, ln_phi_bounds, trace_u128};
use jsrlab::arith::{PrecisionPolicy, RealBall, TargetRad};
use jsrlab::jsr::{
    bounds_from_stats, bounds_table, extremal_witnesses, lower_bound, necklaces, upper_bound,
    WordStats,
};
use jsrlab::scurve::rho_lower_exact;
use jsrlab::words::{is_power_balanced, FiniteWord};

const D: u32 = 90;

fn ball(n: i64, d: i64) -> RealBall {
    RealBall::from_fraction(&frac(n, d), 256)
}

fn target() -> TargetRad {
    TargetRad::bits(100)
}

fn alternating(n: usize) -> FiniteWord {
    "01".parse::<FiniteWord>().unwrap().pow(n / 2)
}

#[test]
fn lower_examples() {
    let (lo, hi) = ln_phi_bounds(D);
    let b = lower_bound(&ball(1, 1), 2, false).unwrap();
    assert!(encloses(&b.lower, &lo, &hi));
    assert_eq!(b.lower_witness.canonical_rotation(), alternating(2));

    let b = lower_bound(&ball(1, 1), 1, false).unwrap();
    assert!(b.lower.contains_fraction(&frac(0, 1)));

    let all = lower_bound(&ball(1, 2), 6, false).unwrap();
    let bal = lower_bound(&ball(1, 2), 6, true).unwrap();
    assert!(all.lower.overlaps(&bal.lower));
    assert_eq!(all.lower_witness.canonical_rotation(), bal.lower_witness.canonical_rotation());
}

#[test]
fn upper_examples() {
    let (lo, hi) = ln_phi_bounds(D);
    assert!(encloses(&upper_bound(&ball(1, 1), 1).unwrap(), &lo, &hi));

    let zero = RealBall::zero(256);
    let mut prev = None;
    for n in 1..=12 {
        let u = upper_bound(&zero, n).unwrap();
        assert!(!u.certainly_lt(&RealBall::zero(64)));
        if let Some(p) = prev {
            assert!(!u.certainly_gt(&p), "n = {n}");
        }
        prev = Some(u);
    }
    assert!(lower_bound(&zero, 8, false).unwrap().lower.contains_fraction(&frac(0, 1)));

    let up = upper_bound(&ball(1, 1), 12).unwrap();
    let low = lower_bound(&ball(1, 1), 12, false).unwrap().lower;
    assert!(!low.certainly_gt(&up));
}

#[test]
fn bounds_meet_at_one() {
    let lower = lower_bound(&ball(1, 1), 2, false).unwrap().lower;
    let upper = upper_bound(&ball(1, 1), 1).unwrap();
    assert!(lower.overlaps(&upper));
    assert!(lower.rad_at_most_pow2(100) && upper.rad_at_most_pow2(100));
}

#[test]
fn witness_examples() {
    let w2 = extremal_witnesses(&ball(1, 1), 2).unwrap();
    assert_eq!(w2, vec![alternating(2)]);
    for n in (2..=12).step_by(2) {
        let w = extremal_witnesses(&ball(1, 1), n).unwrap();
        assert!(w.contains(&alternating(n).canonical_rotation()), "n = {n}");
    }
    let w13 = extremal_witnesses(&ball(3, 4), 13).unwrap();
    assert!(w13.iter().any(|u| u.ones_count() == 5), "{w13:?}");
    assert!(extremal_witnesses(&ball(1, 1), 1).is_err());
}

#[test]
fn finite_maximisers_are_balanced_up_to_12() {
    // Every necklace attaining the largest trace for its length and ones
    // count has a balanced periodic extension.
    for n in 1..=12 {
        let all = necklaces(n);
        let mut best = vec![0u128; n + 1];
        for u in &all {
            let p = u.ones_count();
            best[p] = best[p].max(trace_u128(u.bits()));
        }
        for u in &all {
            if trace_u128(u.bits()) == best[u.ones_count()] {
                assert!(is_power_balanced(u).unwrap(), "{u}");
            }
        }
    }
}

#[test]
fn necklaces_are_canonical_and_complete() {
    // Number of binary necklaces of length n.
    let counts = [2, 3, 4, 6, 8, 14, 20, 36, 60, 108, 188, 352];
    for (i, &c) in counts.iter().enumerate() {
        let ns = necklaces(i + 1);
        assert_eq!(ns.len(), c, "n = {}", i + 1);
        assert!(ns.iter().all(|u| u.canonical_rotation() == *u));
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn grid_invariants_up_to_12() {
    let all = WordStats::compute(12, false).unwrap();
    let bal = WordStats::compute(12, true).unwrap();
    let policy = PrecisionPolicy::default();
    for k in 1..=20 {
        let alpha = ball(k, 20);
        let rows = bounds_table(&all, &alpha, target(), &policy).unwrap();
        for w in rows.windows(2) {
            assert!(!w[1].lower.certainly_lt(&w[0].lower), "alpha = {k}/20");
            assert!(!w[1].upper.certainly_gt(&w[0].upper), "alpha = {k}/20");
        }
        for r in &rows {
            assert!(!r.lower.certainly_gt(&r.upper), "alpha = {k}/20, n = {}", r.n);
        }
        let b = bounds_from_stats(&bal, &alpha, target(), &policy).unwrap();
        assert!(b.lower.overlaps(&rows[11].lower), "alpha = {k}/20");

        let rho = rho_lower_exact(&frac(k, 20), 30, target()).unwrap();
        let ln_rho = rho.ln().unwrap();
        assert!(!ln_rho.certainly_gt(&rows[11].upper), "alpha = {k}/20");
    }
}
