//! Exact 2x2 integer matrices and products of `A0 = [[1,1],[0,1]]`,
//! `A1 = [[1,0],[1,1]]` along binary words.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{ball_sqrt, PrecisionPolicy, RealBall, TargetRad};
use crate::error::{Error, Result};
use crate::words::FiniteWord;

/// Order in which a word's letters are multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `product(u) = A_{u_1} A_{u_2} ... A_{u_n}`.
    LeftToRight,
    /// `product(u) = A_{u_n} ... A_{u_2} A_{u_1}`.
    RightToLeft,
}

/// The orientation used by every product in this crate.
pub const ORIENTATION: Orientation = Orientation::LeftToRight;

/// Where a matrix came from. Only word products are guaranteed to be
/// non-negative with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    WordProduct,
    General,
}

/// `[[a, b], [c, d]]`.
#[derive(Clone, Debug)]
pub struct ExactMat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    provenance: Provenance,
}

impl PartialEq for ExactMat2 {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c && self.d == other.d
    }
}

impl Eq for ExactMat2 {}

impl ExactMat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        ExactMat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            provenance: Provenance::General,
        }
    }

    fn word(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        ExactMat2 {
            a,
            b,
            c,
            d,
            provenance: Provenance::WordProduct,
        }
    }

    pub fn identity() -> Self {
        ExactMat2::word(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn a0() -> Self {
        ExactMat2::word(BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::one())
    }

    pub fn a1() -> Self {
        ExactMat2::word(BigInt::one(), BigInt::zero(), BigInt::one(), BigInt::one())
    }

    pub fn generator(symbol: u8) -> Self {
        if symbol == 0 {
            ExactMat2::a0()
        } else {
            ExactMat2::a1()
        }
    }

    /// `J = diag(1, -1)`.
    pub fn j() -> Self {
        ExactMat2::new(1, 0, 0, -1)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn mul(&self, o: &ExactMat2) -> ExactMat2 {
        let provenance = if self.provenance == Provenance::WordProduct
            && o.provenance == Provenance::WordProduct
        {
            Provenance::WordProduct
        } else {
            Provenance::General
        };
        ExactMat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
            provenance,
        }
    }

    pub fn sub(&self, o: &ExactMat2) -> ExactMat2 {
        ExactMat2::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }

    pub fn scale(&self, k: &BigInt) -> ExactMat2 {
        ExactMat2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    pub fn transpose(&self) -> ExactMat2 {
        ExactMat2 {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
            provenance: self.provenance,
        }
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// `tr(M^T M)`, the sum of squared entries.
    pub fn frobenius_sq(&self) -> BigInt {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }

    /// Smaller diagonal entry in modulus.
    pub fn diag_min(&self) -> BigInt {
        self.a.abs().min(self.d.abs())
    }

    /// Largest entry.
    pub fn entry_max(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .max()
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_nonnegative(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|x| !x.is_negative())
    }
}

impl fmt::Display for ExactMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `alpha^{ones} * core` kept symbolic in `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledProduct {
    pub core: ExactMat2,
    pub ones: usize,
    pub length: usize,
}

impl ScaledProduct {
    pub fn of_word(u: &FiniteWord) -> Self {
        ScaledProduct {
            core: word_product(u),
            ones: u.ones_count(),
            length: u.len(),
        }
    }

    /// Enclosure of `ln rho(alpha^{ones} core)` for `alpha > 0`.
    pub fn log_spectral_radius(&self, ln_alpha: &RealBall, target: TargetRad) -> Result<RealBall> {
        let base = log_spectral_radius(&self.core, target)?;
        if self.ones == 0 {
            return Ok(base);
        }
        Ok(&base + &ln_alpha.mul_int(&BigInt::from(self.ones)))
    }
}

/// Product along `u` in the given orientation.
pub fn word_product_oriented(u: &FiniteWord, orientation: Orientation) -> ExactMat2 {
    let mut m = ExactMat2::identity();
    let bits = u.bits();
    let mut step = |s: u8| m = m.mul(&ExactMat2::generator(s));
    match orientation {
        Orientation::LeftToRight => bits.iter().for_each(|&s| step(s)),
        Orientation::RightToLeft => bits.iter().rev().for_each(|&s| step(s)),
    }
    m
}

/// Product along `u` in the crate-wide [`ORIENTATION`].
pub fn word_product(u: &FiniteWord) -> ExactMat2 {
    word_product_oriented(u, ORIENTATION)
}

/// `ln((t + sqrt(t^2 - 4)) / 2)` at working precision `prec`, for `t >= 2`.
pub fn log_rho_from_trace(t: &BigInt, prec: u32) -> Result<RealBall> {
    let two = BigInt::from(2);
    if *t < two {
        return Err(Error::Precondition(format!("trace {t} below 2")));
    }
    if *t == two {
        return Ok(RealBall::zero(prec));
    }
    let disc = RealBall::from_int(t * t - 4, prec);
    let rho = (&RealBall::from_int(t.clone(), prec) + &ball_sqrt(&disc)?).mul_pow2(-1);
    rho.ln()
}

/// `ln` of the larger eigenvalue of a symmetric `2x2` with trace `s` and
/// determinant `det^2`, halved; i.e. `ln |||M|||`.
pub fn log_norm_from_invariants(s: &BigInt, det: &BigInt, prec: u32) -> Result<RealBall> {
    if !s.is_positive() {
        return Err(Error::Domain("norm of the zero matrix".into()));
    }
    let disc = s * s - det * det * 4;
    let root = ball_sqrt(&RealBall::from_int(disc, prec))?;
    let lam = (&RealBall::from_int(s.clone(), prec) + &root).mul_pow2(-1);
    Ok(lam.ln()?.mul_pow2(-1))
}

/// Enclosure of `ln rho(M)` for a word product (`det = 1`, trace `>= 2`).
pub fn log_spectral_radius(m: &ExactMat2, target: TargetRad) -> Result<RealBall> {
    log_spectral_radius_with(m, target, &PrecisionPolicy::default())
}

pub fn log_spectral_radius_with(
    m: &ExactMat2,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<RealBall> {
    if !m.det().is_one() || !m.is_nonnegative() {
        return Err(Error::Precondition(format!(
            "spectral radius formula needs a non-negative unimodular matrix, got {m}"
        )));
    }
    let t = m.trace();
    policy.certify(target, |prec| log_rho_from_trace(&t, prec))
}

/// Enclosure of `ln |||M|||`, the spectral norm.
pub fn log_euclidean_norm(m: &ExactMat2, target: TargetRad) -> Result<RealBall> {
    log_euclidean_norm_with(m, target, &PrecisionPolicy::default())
}

pub fn log_euclidean_norm_with(
    m: &ExactMat2,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<RealBall> {
    let s = m.frobenius_sq();
    let det = m.det();
    policy.certify(target, |prec| log_norm_from_invariants(&s, &det, prec))
}

/// The integer `k` with `product(rev(w)) - product(w) = k J`.
pub fn commutator_k(w: &FiniteWord) -> Result<BigInt> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let diff = word_product(&w.reverse()).sub(&word_product(w));
    if !diff.b.is_zero() || !diff.c.is_zero() || diff.a != -&diff.d {
        return Err(Error::Internal(format!(
            "reversal difference {diff} is not a multiple of J"
        )));
    }
    Ok(diff.a)
}

/// Product of the word `s^{r_1} (1-s)^{r_2} s^{r_3} ...` via continuants.
///
/// Multiplying on the right by `A0^r` adds `r` times column 1 to column 2,
/// and `A1^r` does the reverse, so the two columns follow the recurrence
/// `v_k = r_k v_{k-1} + v_{k-2}`.
pub fn cf_product(runs: &[u64], leading_symbol: u8) -> Result<ExactMat2> {
    if runs.is_empty() {
        return Err(Error::Parameter("run list is empty".into()));
    }
    if runs.contains(&0) {
        return Err(Error::Parameter("runs must be positive".into()));
    }
    if leading_symbol > 1 {
        return Err(Error::InvalidSymbol(char::from(b'0' + leading_symbol.min(9))));
    }
    let e1 = (BigInt::one(), BigInt::zero());
    let e2 = (BigInt::zero(), BigInt::one());
    let (mut prev, mut cur) = if leading_symbol == 0 { (e2, e1) } else { (e1, e2) };
    for &r in runs {
        let r = BigInt::from(r);
        let next = (&r * &cur.0 + &prev.0, &r * &cur.1 + &prev.1);
        prev = std::mem::replace(&mut cur, next);
    }
    // Odd steps write column 2 when the word starts with 0, column 1 otherwise.
    let last_is_col2 = (runs.len() % 2 == 1) == (leading_symbol == 0);
    let (c1, c2) = if last_is_col2 { (prev, cur) } else { (cur, prev) };
    Ok(ExactMat2::word(c1.0, c2.0, c1.1, c2.1))
}

/// The chain `|||M|||/(2N^2) <= d(M) <= tr(M)/2 <= rho(M) <= |||M|||` for
/// `M = product(u)`, decided with integer arithmetic only.
pub fn rho_norm_chain_check(u: &FiniteWord, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::Parameter(format!("N = {n} must be at least 2")));
    }
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    if u.max_run(0) >= n || u.max_run(1) >= n {
        return Err(Error::Precondition(format!("{u} contains a run of length {n}")));
    }
    let m = word_product(u);
    let t = m.trace();
    let s = m.frobenius_sq();
    let dmin = m.diag_min();
    let four = BigInt::from(4);

    let d_le_half_trace = &dmin * 2 <= t;
    // tr/2 <= rho holds whenever the eigenvalues are real.
    let half_trace_le_rho = &t * &t >= four;
    // With det 1: rho^2 + rho^-2 = t^2 - 2 and |||M|||^2 + |||M|||^-2 = s.
    let rho_le_norm = &t * &t - 2 <= s;
    // |||M|||^2 = (s + sqrt(s^2 - 4)) / 2 <= X  iff  2X >= s and s^2 - 4 <= (2X - s)^2.
    let nn = BigInt::from(n);
    let bound = &nn * &nn * 2 * &dmin;
    let x: BigInt = &bound * &bound;
    let gap: BigInt = &x * 2 - &s;
    let norm_le_bound = !gap.is_negative() && &s * &s - &four <= &gap * &gap;

    Ok(d_le_half_trace && half_trace_le_rho && rho_le_norm && norm_le_bound)
}
