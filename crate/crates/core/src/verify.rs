//! Runtime invariant suites, runnable from the command line.
//!
//! Each check recomputes a known identity or inequality from scratch and
//! reports whether it held. Randomised checks draw from a seeded ChaCha
//! stream, so a run is reproducible from its seed.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphastar::{
    alpha_n_factored, b_matrix, b_matrix_traces, error_bound_exponent, fibonacci,
    partial_product_factored, tau,
};
use crate::arith::{fraction_to_decimal, parse_decimal, Fraction, PrecisionPolicy, RealBall, TargetRad};
use crate::error::{Error, Result};
use crate::jsr::{bounds_from_stats, WordStats};
use crate::mat::{
    cf_product, commutator_k, log_euclidean_norm, log_rho_from_trace, log_spectral_radius,
    rho_norm_chain_check, word_product,
};
use crate::scurve::{argmax_r_exact, argmax_r_sweep, farey_pairs, s_of};
use crate::words::{
    enumerate_x, find_suboptimal_triple, fibonacci_word, is_balanced, is_power_balanced,
    FiniteWord,
};

pub const SUITES: [&str; 6] = ["arith", "words", "mat", "scurve", "jsr", "alphastar"];

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{tag} {}::{}", self.suite, self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

struct Recorder {
    suite: &'static str,
    out: Vec<CheckResult>,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Recorder {
            suite,
            out: Vec::new(),
        }
    }

    fn check(&mut self, name: &'static str, f: impl FnOnce() -> Result<std::result::Result<(), String>>) {
        let (passed, detail) = match f() {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(why)) => (false, why),
            Err(e) => (false, e.to_string()),
        };
        self.out.push(CheckResult {
            suite: self.suite,
            name,
            passed,
            detail,
        });
    }
}

fn all_words(max_len: usize) -> impl Iterator<Item = FiniteWord> {
    (0..=max_len).flat_map(|n| (0..1u64 << n).map(move |c| FiniteWord::from_code(c, n)))
}

/// Balance by comparing every pair of equal-length factors.
pub fn is_balanced_by_definition(u: &FiniteWord) -> bool {
    let n = u.len();
    for len in 1..n {
        for i in 0..=n - len {
            for j in i + 1..=n - len {
                let a = u.slice(i, i + len).ones_count();
                let b = u.slice(j, j + len).ones_count();
                if a.abs_diff(b) > 1 {
                    return false;
                }
            }
        }
    }
    true
}

fn fail(msg: impl Into<String>) -> Result<std::result::Result<(), String>> {
    Ok(Err(msg.into()))
}

fn pass() -> Result<std::result::Result<(), String>> {
    Ok(Ok(()))
}

fn arith_suite(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut r = Recorder::new("arith");
    let samples: Vec<(i64, i64)> = (0..200)
        .map(|_| (rng.gen_range(1..10_000), rng.gen_range(1..10_000)))
        .collect();
    r.check("containment of ln/sqrt/exp", || {
        for &(n, d) in &samples {
            let x = Fraction::new(n.into(), d.into());
            let b = RealBall::from_fraction(&x, 96);
            // exp(ln x) and sqrt(x)^2 must contain x.
            let round = b.ln()?.exp();
            if !round.contains_fraction(&x) {
                return fail(format!("exp(ln {x}) misses {x}"));
            }
            let s = b.sqrt()?;
            if !(&s * &s).contains_fraction(&x) {
                return fail(format!("sqrt({x})^2 misses {x}"));
            }
        }
        pass()
    });
    r.check("doubling precision never widens", || {
        for &(n, d) in &samples {
            let x = Fraction::new(n.into(), d.into());
            let lo = RealBall::from_fraction(&x, 80).ln()?;
            let hi = RealBall::from_fraction(&x, 160).ln()?;
            if hi.rad() > lo.rad() {
                return fail(format!("ln {x}: radius grew"));
            }
        }
        pass()
    });
    r.check("decimal expansion error below one ulp", || {
        for &(n, d) in &samples {
            let x = Fraction::new(n.into(), d.into()) / Fraction::from_integer(BigInt::from(1000));
            if x >= Fraction::from_integer(10.into()) {
                continue;
            }
            let s = fraction_to_decimal(&x, 12)?;
            let back = parse_decimal(&s)?;
            let ulp = Fraction::new(BigInt::one(), BigInt::from(10u64.pow(12)));
            let diff = if back > x { &back - &x } else { &x - &back };
            if diff >= ulp {
                return fail(format!("{x} -> {s}"));
            }
        }
        pass()
    });
    r.out
}

fn words_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("words");
    r.check("window test matches definition (n <= 12)", || {
        for u in all_words(12) {
            if is_balanced(&u) != is_balanced_by_definition(&u) {
                return fail(format!("{u}"));
            }
        }
        pass()
    });
    r.check("rotations / square / fourth power agree (n <= 12)", || {
        for u in all_words(12).filter(|u| !u.is_empty()) {
            let rot = u.rotations().iter().all(is_balanced);
            let sq = is_power_balanced(&u)?;
            let fourth = is_balanced(&u.pow(4));
            if rot != sq || sq != fourth {
                return fail(format!("{u}"));
            }
        }
        pass()
    });
    r.check("suboptimal triple exists iff unbalanced (n <= 12)", || {
        for u in all_words(12) {
            match find_suboptimal_triple(&u) {
                Some(_) if is_balanced(&u) => return fail(format!("triple for balanced {u}")),
                Some(t) if !u.contains(&t.joined()) => return fail(format!("{u}: not a factor")),
                None if !is_balanced(&u) => return fail(format!("no triple for {u}")),
                _ => {}
            }
        }
        pass()
    });
    r.check("X_{p/q} has q balanced shift-closed elements (q <= 20)", || {
        for (p, q) in farey_pairs(20) {
            let xs = enumerate_x(p, q)?;
            if xs.len() as u64 != q {
                return fail(format!("|X_{p}/{q}| = {}", xs.len()));
            }
            for u in &xs {
                if !is_power_balanced(u)? || !xs.contains(&u.rotate(1)) || u.ones_count() as u64 != p {
                    return fail(format!("{u} in X_{p}/{q}"));
                }
            }
            if 0 < p && p < q {
                let big_n = (q.div_ceil(p)).max(q.div_ceil(q - p)) as usize + 1;
                if xs.iter().any(|u| u.pow(2).max_run(0) >= big_n || u.pow(2).max_run(1) >= big_n) {
                    return fail(format!("long run in X_{p}/{q}"));
                }
            }
        }
        pass()
    });
    r.check("Fibonacci words are mechanical up to rotation (4 <= n <= 16)", || {
        for n in 4..=16 {
            let u = fibonacci_word(n)?;
            let q = u.len() as u64;
            let p = u.ones_count() as u64;
            if !enumerate_x(p, q)?.contains(&u) {
                return fail(format!("u({n})"));
            }
        }
        pass()
    });
    r.out
}

fn mat_suite(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut r = Recorder::new("mat");
    r.check("unimodular, non-negative, reversal- and rotation-invariant trace (n <= 12)", || {
        for u in all_words(12) {
            let m = word_product(&u);
            if !m.det().is_one() || !m.is_nonnegative() {
                return fail(format!("{u}"));
            }
            if m.trace() != word_product(&u.reverse()).trace()
                || m.trace() != word_product(&u.rotate(1)).trace()
            {
                return fail(format!("trace symmetry fails at {u}"));
            }
        }
        pass()
    });
    r.check("continuant product equals word product (n <= 12)", || {
        for u in all_words(12).filter(|u| !u.is_empty()) {
            let runs: Vec<u64> = u.runs().iter().map(|&(_, n)| n as u64).collect();
            if cf_product(&runs, u.bits()[0])? != word_product(&u) {
                return fail(format!("{u}"));
            }
        }
        pass()
    });
    r.check("reversal difference is k J with the lexicographic sign law (n <= 12)", || {
        for u in all_words(12).filter(|u| !u.is_empty()) {
            let k = commutator_k(&u)?;
            let want = u.lex_compare(&u.reverse())?;
            if k.cmp(&BigInt::zero()) != want {
                return fail(format!("{u}: k = {k}"));
            }
        }
        pass()
    });
    r.check("rho <= norm chain on random words", || {
        for _ in 0..2000 {
            let n = rng.gen_range(1..=40);
            let u = FiniteWord::from_bits((0..n).map(|_| rng.gen_range(0..2)).collect())?;
            let big_n = u.max_run(0).max(u.max_run(1)).max(1) + 1;
            if !rho_norm_chain_check(&u, big_n)? {
                return fail(format!("{u}, N = {big_n}"));
            }
        }
        pass()
    });
    r.check("log rho <= log norm (n <= 10)", || {
        for u in all_words(10).filter(|u| !u.is_empty()) {
            let m = word_product(&u);
            let rho = log_spectral_radius(&m, TargetRad::bits(60))?;
            let norm = log_euclidean_norm(&m, TargetRad::bits(60))?;
            if rho.certainly_gt(&norm) {
                return fail(format!("{u}"));
            }
        }
        pass()
    });
    r.out
}

fn scurve_suite(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut r = Recorder::new("scurve");
    let t = TargetRad::bits(80);
    r.check("symmetry and bounds (q <= 30)", || {
        let ln_phi = s_of(1, 2, t)?.value;
        for (p, q) in farey_pairs(30) {
            let a = s_of(p, q, t)?.value;
            let b = s_of(q - p, q, t)?.value;
            if !a.overlaps(&b) {
                return fail(format!("S({p}/{q}) vs S({}/{q})", q - p));
            }
            if a.upper().is_negative() || a.certainly_gt(&ln_phi) {
                return fail(format!("S({p}/{q}) out of range"));
            }
        }
        pass()
    });
    r.check("S(1/n) <= ln(n+2)/(n+1) (n <= 30)", || {
        for n in 1..=30u64 {
            let s = s_of(1, n + 1, t)?.value;
            let bound = RealBall::from_int(n + 2, 128)
                .ln()?
                .div_int(&BigInt::from(n + 1))?;
            if s.certainly_gt(&bound) {
                return fail(format!("n = {n}"));
            }
        }
        pass()
    });
    r.check("descent agrees with exhaustive sweep", || {
        let policy = PrecisionPolicy::default();
        for _ in 0..12 {
            let big_q = rng.gen_range(2..=40);
            let den = 1000i64;
            let alpha = Fraction::new(rng.gen_range(1..=den).into(), den.into());
            let fast = argmax_r_exact(&alpha, big_q, TargetRad::bits(40))?.best;
            let slow = argmax_r_sweep(&alpha, big_q, &policy)?;
            if fast != slow {
                return fail(format!("alpha = {alpha}, Q = {big_q}: {fast} vs {slow}"));
            }
        }
        pass()
    });
    r.out
}

fn jsr_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("jsr");
    r.check("lower <= upper and balanced restriction is harmless (n <= 12)", || {
        let all = WordStats::compute(12, false)?;
        let bal = WordStats::compute(12, true)?;
        let policy = PrecisionPolicy::default();
        for k in 1..=10 {
            let alpha = RealBall::from_fraction(&Fraction::new(k.into(), 10.into()), 128);
            let a = bounds_from_stats(&all, &alpha, TargetRad::bits(60), &policy)?;
            let b = bounds_from_stats(&bal, &alpha, TargetRad::bits(60), &policy)?;
            if a.lower.certainly_gt(&a.upper) {
                return fail(format!("alpha = {k}/10: bracket inverted"));
            }
            if !a.lower.overlaps(&b.lower) {
                return fail(format!("alpha = {k}/10: balanced maximum differs"));
            }
        }
        pass()
    });
    r.out
}

fn alphastar_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("alphastar");
    r.check("tau_n = tr B_n (n <= 40)", || {
        let t = tau(40);
        for (i, tr) in b_matrix_traces(40).iter().enumerate() {
            if *tr != t.values()[i + 1] {
                return fail(format!("n = {}", i + 1));
            }
        }
        pass()
    });
    r.check("tau_n <= 2^F_n (n <= 30)", || {
        let t = tau(30);
        for n in 1..=30 {
            let f = u32::try_from(fibonacci(n)?).map_err(|_| Error::Internal("F_n overflow".into()))?;
            if t.values()[n] > BigInt::one() << f {
                return fail(format!("n = {n}"));
            }
        }
        pass()
    });
    r.check("0 < ln tau_n - ln rho(B_n) <= rho(B_n)^-2 (n <= 20)", || {
        let t = tau(20);
        for n in 3..=20 {
            let tn = &t.values()[n];
            let bits = 2 * tn.bits() as u32 + 64;
            let policy = PrecisionPolicy::new(bits.next_power_of_two(), 1 << 15)?;
            let ok = policy.decide("trace gap", |prec| {
                let ln_rho = log_rho_from_trace(&b_matrix(n)?.trace(), prec)?;
                let gap = &RealBall::from_int(tn.clone(), prec).ln()? - &ln_rho;
                let rho_inv_sq = ln_rho.mul_int(&BigInt::from(-2)).exp();
                if gap.certainly_positive() && (&rho_inv_sq - &gap).certainly_positive() {
                    return Ok(Some(true));
                }
                Ok(None)
            });
            match ok {
                Ok(_) => {}
                Err(e) if e.is_precision() => return fail(format!("n = {n}: {e}")),
                Err(e) => return Err(e),
            }
        }
        pass()
    });
    r.check("product form equals closed form (N <= 20)", || {
        for n in 1..=20 {
            if partial_product_factored(n)? != alpha_n_factored(n)? {
                return fail(format!("N = {n}"));
            }
        }
        pass()
    });
    r.check("tr B_n equals the Fibonacci word trace (n <= 20)", || {
        for n in 1..=20 {
            if b_matrix(n)?.trace() != word_product(&fibonacci_word(n)?).trace() {
                return fail(format!("n = {n}"));
            }
        }
        pass()
    });
    r.check("error exponents strictly decrease (4 <= N <= 15)", || {
        let mut prev = error_bound_exponent(4)?;
        for n in 5..=15 {
            let e = error_bound_exponent(n)?;
            if e >= prev {
                return fail(format!("N = {n}: {e} >= {prev}"));
            }
            prev = e;
        }
        pass()
    });
    r.out
}

/// Run one suite by name, or `all`.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(Error::Parameter(format!(
            "unknown suite {name:?}; expected one of {} or all",
            SUITES.join(", ")
        )));
    };
    for s in names {
        out.extend(match s {
            "arith" => arith_suite(&mut rng),
            "words" => words_suite(),
            "mat" => mat_suite(&mut rng),
            "scurve" => scurve_suite(&mut rng),
            "jsr" => jsr_suite(),
            _ => alphastar_suite(),
        });
    }
    Ok(out)
}
