mod common;

use common::{encloses, frac, ln_bounds, ln_phi_bounds, ln_rho_bounds, product_u128, word_bits};
use jsrlab::arith::{Fraction, TargetRad};
use jsrlab::mat::{
    cf_product, commutator_k, log_euclidean_norm, log_spectral_radius, rho_norm_chain_check,
    word_product, ExactMat2, Provenance,
};
use jsrlab::words::{is_power_balanced, FiniteWord};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn w(s: &str) -> FiniteWord {
    s.parse().unwrap()
}

fn fib(n: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

fn target() -> TargetRad {
    TargetRad::bits(120)
}

#[test]
fn product_examples() {
    for n in 0..20i64 {
        let zeros = FiniteWord::repeat(0, n as usize);
        assert_eq!(word_product(&zeros), ExactMat2::new(1, n, 0, 1));
    }
    assert_eq!(word_product(&FiniteWord::empty()), ExactMat2::identity());
    assert_eq!(word_product(&w("001")), ExactMat2::new(3, 2, 1, 1));
    assert_eq!(word_product(&w("001")).provenance(), Provenance::WordProduct);
}

#[test]
fn alternating_word_gives_fibonacci_entries() {
    // With F_0 = 0, F_1 = 1 the entries are F_{2n+1}, F_{2n}, F_{2n-1}.
    for n in 1..=30 {
        let m = word_product(&w("01").pow(n));
        let want = ExactMat2::new(fib(2 * n + 1), fib(2 * n), fib(2 * n), fib(2 * n - 1));
        assert_eq!(m, want, "n = {n}");
    }
}

#[test]
fn scalar_examples() {
    let id = ExactMat2::identity();
    assert_eq!(id.trace(), BigInt::from(2));
    assert_eq!(id.det(), BigInt::from(1));
    assert_eq!(id.diag_min(), BigInt::from(1));
    let m = word_product(&w("001"));
    assert_eq!(m.entry_max(), BigInt::from(3));
    assert_eq!(m.diag_min(), BigInt::from(1));
}

#[test]
fn spectral_radius_examples() {
    let t2 = ExactMat2::identity();
    let r = log_spectral_radius(&t2, target()).unwrap();
    assert!(r.is_exact() && r.mid().is_zero());

    let (lo, hi) = ln_phi_bounds(90);
    let two = frac(2, 1);
    let t3 = word_product(&w("01"));
    assert_eq!(t3.trace(), BigInt::from(3));
    assert!(encloses(&log_spectral_radius(&t3, target()).unwrap(), &(&lo * &two), &(&hi * &two)));

    let t10 = word_product(&w("01010"));
    assert_eq!(t10.trace(), BigInt::from(10));
    let (lo, hi) = ln_rho_bounds(&BigInt::from(10), 90);
    assert!(encloses(&log_spectral_radius(&t10, target()).unwrap(), &lo, &hi));

    assert!(log_spectral_radius(&ExactMat2::new(2, 0, 0, 1), target()).is_err());
}

#[test]
fn norm_examples() {
    let z = log_euclidean_norm(&ExactMat2::identity(), target()).unwrap();
    assert!(z.contains_fraction(&Fraction::from_integer(0.into())));

    let (lo, hi) = ln_phi_bounds(90);
    assert!(encloses(&log_euclidean_norm(&ExactMat2::a0(), target()).unwrap(), &lo, &hi));
    assert!(encloses(&log_euclidean_norm(&ExactMat2::a1(), target()).unwrap(), &lo, &hi));

    for n in 2..40i64 {
        let m = ExactMat2::new(1, n, 0, 1);
        let ln_n = ln_bounds(&frac(n, 1), 40).1;
        let got = log_euclidean_norm(&m, target()).unwrap();
        assert!(got.lower().to_fraction() >= ln_n, "n = {n}");
    }
}

#[test]
fn commutator_examples() {
    assert_eq!(commutator_k(&w("01")).unwrap().abs(), BigInt::from(1));
    assert_eq!(commutator_k(&w("001")).unwrap(), BigInt::from(-2));
    for p in ["0", "1", "010", "0110", "10101"] {
        assert_eq!(commutator_k(&w(p)).unwrap(), BigInt::from(0));
    }
    assert!(commutator_k(&FiniteWord::empty()).is_err());
}

#[test]
fn commutator_sign_follows_lex_order_up_to_14() {
    for n in 1..=14 {
        for code in 0..(1u64 << n) {
            let u = FiniteWord::from_code(code, n);
            let k = commutator_k(&u).unwrap();
            let ord = u.lex_compare(&u.reverse()).unwrap();
            assert_eq!(k.signum(), BigInt::from(ord as i8), "{u}");
        }
    }
}

#[test]
fn products_exhaustive_up_to_14() {
    for n in 0..=14 {
        for code in 0..(1u64 << n) {
            let bits = word_bits(code, n);
            let u = FiniteWord::from_bits(bits.clone()).unwrap();
            let m = word_product(&u);
            let o = product_u128(&bits);
            assert_eq!(m, ExactMat2::new(o[0], o[1], o[2], o[3]), "{u}");
            assert_eq!(m.det(), BigInt::from(1));
            assert!(m.is_nonnegative());
            assert_eq!(m.trace(), word_product(&u.reverse()).trace(), "{u}");
            if n <= 12 && n > 0 {
                assert_eq!(m.trace(), word_product(&u.rotate(1)).trace(), "{u}");
            }
            if n > 0 {
                let runs: Vec<u64> = u.runs().iter().map(|&(_, r)| r as u64).collect();
                assert_eq!(cf_product(&runs, u.bits()[0]).unwrap(), m, "{u}");
            }
        }
    }
}

#[test]
fn cf_examples() {
    assert_eq!(cf_product(&[7], 0).unwrap(), ExactMat2::new(1, 7, 0, 1));
    assert_eq!(cf_product(&[1, 1], 0).unwrap(), word_product(&w("01")));
    assert_eq!(cf_product(&[2, 1], 1).unwrap(), word_product(&w("110")));
    assert!(cf_product(&[], 0).is_err());
    assert!(cf_product(&[1, 0], 0).is_err());
}

#[test]
fn chain_examples() {
    assert!(rho_norm_chain_check(&w("01"), 2).unwrap());
    assert!(rho_norm_chain_check(&w("00101"), 3).unwrap());
    assert!(rho_norm_chain_check(&w("0011"), 2).is_err());
    for n in 1..=10 {
        for code in 0..(1u64 << n) {
            let u = FiniteWord::from_code(code, n);
            if !is_power_balanced(&u).unwrap() {
                continue;
            }
            let big_n = u.max_run(0).max(u.max_run(1)) + 1;
            assert!(rho_norm_chain_check(&u, big_n.max(2)).unwrap(), "{u}");
        }
    }
}

proptest! {
    #[test]
    fn long_products_are_unimodular(bits in prop::collection::vec(0u8..=1, 0..200)) {
        let u = FiniteWord::from_bits(bits).unwrap();
        let m = word_product(&u);
        prop_assert_eq!(m.det(), BigInt::from(1));
        prop_assert!(m.is_nonnegative());
        prop_assert_eq!(m.trace(), word_product(&u.reverse()).trace());
    }

    #[test]
    fn reversal_difference_is_a_multiple_of_j(bits in prop::collection::vec(0u8..=1, 1..120)) {
        let u = FiniteWord::from_bits(bits).unwrap();
        let k = commutator_k(&u).unwrap();
        let diff = word_product(&u.reverse()).sub(&word_product(&u));
        prop_assert_eq!(diff, ExactMat2::j().scale(&k));
    }

    #[test]
    fn spectral_radius_is_below_norm(bits in prop::collection::vec(0u8..=1, 1..80)) {
        let m = word_product(&FiniteWord::from_bits(bits).unwrap());
        let rho = log_spectral_radius(&m, TargetRad::bits(80)).unwrap();
        let norm = log_euclidean_norm(&m, TargetRad::bits(80)).unwrap();
        prop_assert!(!rho.certainly_gt(&norm));
    }
}
