//! Brute-force bounds on the joint spectral radius of `{A0, alpha A1}`.
//!
//! For every length `n` and ones count `p` a single pass records the largest
//! trace and the largest `tr(M^T M)` over words of that shape. Because
//! `alpha` only scales a product by `alpha^p`, these tables serve every
//! `alpha` at once:
//!
//! * lower bound `max_{n,p} (p ln alpha + ln rho(T_{n,p})) / n`,
//! * upper bound `min_n max_p (p ln alpha + ln |||M|||_{n,p}) / n`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::{Dyadic, PrecisionPolicy, RealBall, TargetRad};
use crate::error::{Error, Result};
use crate::mat::{log_norm_from_invariants, log_rho_from_trace};
use crate::words::{is_power_balanced, FiniteWord};

/// Longest words the fixed-width enumeration supports.
pub const MAX_DEPTH: usize = 40;

const PARALLEL_PREFIX: usize = 10;

/// Per-shape extremes for words of length `n` with `p` ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeStats {
    /// Largest trace seen; zero if no word of this shape was visited.
    pub max_trace: u64,
    /// Least rotation (as a code, first symbol most significant) among the
    /// words attaining `max_trace`, minimised over all of them.
    pub witness: u64,
    /// Largest sum of squared entries.
    pub max_frob: u128,
}

impl ShapeStats {
    const EMPTY: ShapeStats = ShapeStats {
        max_trace: 0,
        witness: u64::MAX,
        max_frob: 0,
    };

    fn absorb(&mut self, o: &ShapeStats) {
        if o.max_trace > self.max_trace
            || (o.max_trace == self.max_trace && o.witness < self.witness)
        {
            self.max_trace = o.max_trace;
            self.witness = o.witness;
        }
        self.max_frob = self.max_frob.max(o.max_frob);
    }

    pub fn is_visited(&self) -> bool {
        self.max_trace > 0
    }
}

/// `stats[n][p]` for `1 <= n <= depth`, `0 <= p <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordStats {
    depth: usize,
    balanced_only: bool,
    stats: Vec<Vec<ShapeStats>>,
}

#[derive(Clone, Copy)]
struct M2 {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl M2 {
    const ID: M2 = M2 { a: 1, b: 0, c: 0, d: 1 };

    fn push(self, s: u64) -> M2 {
        if s == 0 {
            M2 {
                a: self.a,
                b: self.a + self.b,
                c: self.c,
                d: self.c + self.d,
            }
        } else {
            M2 {
                a: self.a + self.b,
                b: self.b,
                c: self.c + self.d,
                d: self.d,
            }
        }
    }

    fn trace(&self) -> u64 {
        self.a + self.d
    }

    fn frob(&self) -> u128 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|&x| x as u128 * x as u128)
            .sum()
    }
}

fn least_rotation(code: u64, n: usize) -> u64 {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = code;
    let mut c = code;
    for _ in 1..n {
        c = ((c << 1) | (c >> (n - 1))) & mask;
        best = best.min(c);
    }
    best
}

fn empty_table(depth: usize) -> Vec<Vec<ShapeStats>> {
    (0..=depth).map(|n| vec![ShapeStats::EMPTY; n + 1]).collect()
}

fn visit(table: &mut [Vec<ShapeStats>], n: usize, ones: usize, code: u64, m: &M2) {
    let cell = &mut table[n][ones];
    let t = m.trace();
    if t > cell.max_trace {
        cell.max_trace = t;
        cell.witness = least_rotation(code, n);
    } else if t == cell.max_trace {
        cell.witness = cell.witness.min(least_rotation(code, n));
    }
    cell.max_frob = cell.max_frob.max(m.frob());
}

fn dfs_all(table: &mut [Vec<ShapeStats>], depth: usize, n: usize, ones: usize, code: u64, m: M2) {
    if n > 0 {
        visit(table, n, ones, code, &m);
    }
    if n == depth {
        return;
    }
    for s in 0..2u64 {
        dfs_all(table, depth, n + 1, ones + s as usize, (code << 1) | s, m.push(s));
    }
}

/// Window extremes of a balanced prefix, extended one symbol at a time.
fn dfs_balanced(
    table: &mut [Vec<ShapeStats>],
    depth: usize,
    bits: &mut Vec<u8>,
    prefix: &mut Vec<usize>,
    ext: &mut Vec<(usize, usize)>,
    m: M2,
) {
    let n = bits.len();
    if n > 0 {
        let word = FiniteWord::from_bits(bits.clone()).unwrap_or_default();
        if is_power_balanced(&word).unwrap_or(false) {
            let code = bits.iter().fold(0u64, |c, &b| (c << 1) | b as u64);
            visit(table, n, prefix[n], code, &m);
        }
    }
    if n == depth {
        return;
    }
    for s in 0..2u8 {
        let total = prefix[n] + s as usize;
        let saved = ext.clone();
        let mut ok = true;
        ext.push((usize::MAX, 0));
        for len in 1..=n + 1 {
            let count = total - prefix[n + 1 - len];
            let e = &mut ext[len - 1];
            e.0 = e.0.min(count);
            e.1 = e.1.max(count);
            if e.1 - e.0 > 1 {
                ok = false;
                break;
            }
        }
        if ok {
            bits.push(s);
            prefix.push(total);
            dfs_balanced(table, depth, bits, prefix, ext, m.push(s as u64));
            bits.pop();
            prefix.pop();
        }
        *ext = saved;
    }
}

impl WordStats {
    /// Visit every word of length `1..=depth`, or only the power-balanced
    /// ones when `balanced_only` is set.
    pub fn compute(depth: usize, balanced_only: bool) -> Result<WordStats> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::Parameter(format!(
                "enumeration depth must lie in 1..={MAX_DEPTH}, got {depth}"
            )));
        }
        let stats = if balanced_only {
            let mut table = empty_table(depth);
            dfs_balanced(&mut table, depth, &mut Vec::new(), &mut vec![0], &mut Vec::new(), M2::ID);
            table
        } else {
            Self::compute_all(depth)
        };
        Ok(WordStats {
            depth,
            balanced_only,
            stats,
        })
    }

    fn compute_all(depth: usize) -> Vec<Vec<ShapeStats>> {
        let split = depth.min(PARALLEL_PREFIX);
        let mut table = empty_table(depth);
        dfs_all(&mut table, split, 0, 0, 0, M2::ID);
        if split == depth {
            return table;
        }
        let partial = (0..1u64 << split)
            .into_par_iter()
            .map(|prefix| {
                let mut local = empty_table(depth);
                let mut m = M2::ID;
                let mut ones = 0;
                for i in (0..split).rev() {
                    let s = (prefix >> i) & 1;
                    m = m.push(s);
                    ones += s as usize;
                }
                for s in 0..2u64 {
                    dfs_all(&mut local, depth, split + 1, ones + s as usize, (prefix << 1) | s, m.push(s));
                }
                local
            })
            .reduce(
                || empty_table(depth),
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(&b) {
                        for (ca, cb) in ra.iter_mut().zip(rb) {
                            ca.absorb(cb);
                        }
                    }
                    a
                },
            );
        for n in split + 1..=depth {
            table[n] = partial[n].clone();
        }
        table
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn balanced_only(&self) -> bool {
        self.balanced_only
    }

    pub fn shape(&self, n: usize, p: usize) -> Option<&ShapeStats> {
        self.stats.get(n)?.get(p)
    }

    pub fn witness(&self, n: usize, p: usize) -> Option<FiniteWord> {
        let s = self.shape(n, p)?;
        s.is_visited().then(|| FiniteWord::from_code(s.witness, n))
    }
}

/// How `alpha` enters: `ln alpha` at a given precision, or `alpha = 0`.
#[derive(Clone, Debug)]
pub enum AlphaParam {
    Zero,
    Positive(RealBall),
}

impl AlphaParam {
    pub fn from_ball(alpha: &RealBall) -> Result<Self> {
        if alpha.is_exact() && alpha.mid().is_zero() {
            return Ok(AlphaParam::Zero);
        }
        if !alpha.certainly_positive() || alpha.upper() > Dyadic::from_int(1) {
            return Err(Error::Parameter(format!(
                "alpha must be 0 or lie in (0, 1], got {alpha}"
            )));
        }
        Ok(AlphaParam::Positive(alpha.clone()))
    }

    fn ln_at(&self, prec: u32) -> Result<Option<RealBall>> {
        match self {
            AlphaParam::Zero => Ok(None),
            AlphaParam::Positive(a) => Ok(Some(a.with_prec(prec.max(a.prec())).ln()?)),
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, AlphaParam::Positive(a) if a.is_exact() && *a.mid() == Dyadic::from_int(1))
    }
}

/// `(p ln alpha + g) / n`, or `g / n` when `p = 0`; `None` if `alpha = 0`
/// and `p > 0` (the term is minus infinity).
fn tilt(g: RealBall, ln_alpha: &Option<RealBall>, n: usize, p: usize) -> Result<Option<RealBall>> {
    let total = match (p, ln_alpha) {
        (0, _) => g,
        (_, None) => return Ok(None),
        (_, Some(l)) => &g + &l.mul_int(&BigInt::from(p)),
    };
    Ok(Some(total.div_int(&BigInt::from(n))?))
}

fn per_length_lower(
    stats: &WordStats,
    alpha: &AlphaParam,
    n: usize,
    prec: u32,
) -> Result<Option<(RealBall, FiniteWord)>> {
    let ln_alpha = alpha.ln_at(prec)?;
    let mut best: Option<(RealBall, FiniteWord)> = None;
    for p in 0..=n {
        let s = &stats.stats[n][p];
        if !s.is_visited() {
            continue;
        }
        let g = log_rho_from_trace(&BigInt::from(s.max_trace), prec)?;
        let Some(v) = tilt(g, &ln_alpha, n, p)? else {
            continue;
        };
        let w = FiniteWord::from_code(s.witness, n);
        best = Some(match best {
            None => (v, w),
            Some((bv, bw)) => {
                if v.certainly_gt(&bv) {
                    (v.max(&bv), w)
                } else {
                    (v.max(&bv), bw)
                }
            }
        });
    }
    Ok(best)
}

fn per_length_upper(stats: &WordStats, alpha: &AlphaParam, n: usize, prec: u32) -> Result<RealBall> {
    let ln_alpha = alpha.ln_at(prec)?;
    let mut best: Option<RealBall> = None;
    for p in 0..=n {
        let s = &stats.stats[n][p];
        if !s.is_visited() {
            continue;
        }
        let g = log_norm_from_invariants(&BigInt::from(s.max_frob), &BigInt::from(1), prec)?;
        let Some(v) = tilt(g, &ln_alpha, n, p)? else {
            continue;
        };
        best = Some(match best {
            None => v,
            Some(b) => b.max(&v),
        });
    }
    best.ok_or_else(|| Error::Internal(format!("no words of length {n} visited")))
}

/// Certified bracket for `ln rho(alpha)`.
#[derive(Clone, Debug)]
pub struct JsrBounds {
    pub alpha: RealBall,
    /// Enclosure of the best lower bound found.
    pub lower: RealBall,
    /// Enclosure of the running minimum of the per-length upper bounds.
    pub upper: RealBall,
    pub lower_witness: FiniteWord,
    pub depth: usize,
}

/// One line of the per-length table.
#[derive(Clone, Debug)]
pub struct JsrRow {
    pub n: usize,
    /// Best lower bound over lengths `<= n`.
    pub lower: RealBall,
    /// Running minimum of the upper bounds over lengths `<= n`.
    pub upper: RealBall,
    pub witness: FiniteWord,
}

fn certify_with<T, F>(policy: &PrecisionPolicy, target: TargetRad, f: F) -> Result<T>
where
    F: Fn(u32) -> Result<(RealBall, T)>,
{
    let mut p = policy.start_bits.max(target.bits + 16).min(policy.max_bits);
    loop {
        let (ball, extra) = f(p)?;
        if target.met_by(&ball) {
            return Ok(extra);
        }
        if p >= policy.max_bits {
            return Err(Error::PrecisionExhausted {
                target_bits: target.bits,
                max_bits: policy.max_bits,
            });
        }
        p = p.saturating_mul(2).min(policy.max_bits);
    }
}

/// Rows `n = 1..=depth` of running lower and upper bounds.
pub fn bounds_table(
    stats: &WordStats,
    alpha: &RealBall,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<Vec<JsrRow>> {
    let param = AlphaParam::from_ball(alpha)?;
    let rows: Vec<(usize, RealBall, FiniteWord, RealBall)> = (1..=stats.depth)
        .into_par_iter()
        .map(|n| {
            let (lo, w) = certify_with(policy, target, |prec| {
                let (v, w) = per_length_lower(stats, &param, n, prec)?
                    .ok_or_else(|| Error::Internal(format!("no words of length {n}")))?;
                Ok((v.clone(), (v, w)))
            })?;
            let up = certify_with(policy, target, |prec| {
                let v = per_length_upper(stats, &param, n, prec)?;
                Ok((v.clone(), v))
            })?;
            Ok((n, lo, w, up))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(rows.len());
    let mut run: Option<(RealBall, FiniteWord, RealBall)> = None;
    for (n, lo, w, up) in rows {
        run = Some(match run {
            None => (lo, w, up),
            Some((rl, rw, ru)) => {
                let witness = if lo.certainly_gt(&rl) { w } else { rw };
                (rl.max(&lo), witness, ru.min(&up))
            }
        });
        let (rl, rw, ru) = run.clone().expect("set above");
        out.push(JsrRow {
            n,
            lower: rl,
            upper: ru,
            witness: rw,
        });
    }
    Ok(out)
}

/// Best lower bound over words of length at most `n_max`.
pub fn lower_bound(alpha: &RealBall, n_max: usize, balanced_only: bool) -> Result<JsrBounds> {
    let stats = WordStats::compute(n_max, balanced_only)?;
    bounds_from_stats(&stats, alpha, TargetRad::bits(128), &PrecisionPolicy::default())
}

/// Running minimum over lengths `1..=n` of the norm-based upper bounds.
pub fn upper_bound(alpha: &RealBall, n: usize) -> Result<RealBall> {
    let stats = WordStats::compute(n, false)?;
    Ok(bounds_from_stats(&stats, alpha, TargetRad::bits(128), &PrecisionPolicy::default())?.upper)
}

pub fn bounds_from_stats(
    stats: &WordStats,
    alpha: &RealBall,
    target: TargetRad,
    policy: &PrecisionPolicy,
) -> Result<JsrBounds> {
    let rows = bounds_table(stats, alpha, target, policy)?;
    let last = rows
        .last()
        .ok_or_else(|| Error::Internal("empty bounds table".into()))?;
    Ok(JsrBounds {
        alpha: alpha.clone(),
        lower: last.lower.clone(),
        upper: last.upper.clone(),
        lower_witness: last.witness.clone(),
        depth: stats.depth,
    })
}

/// Binary necklaces (least rotations) of length `n`, ascending.
pub fn necklaces(n: usize) -> Vec<FiniteWord> {
    fn gen(t: usize, p: usize, n: usize, a: &mut Vec<u8>, out: &mut Vec<FiniteWord>) {
        if t > n {
            if n % p == 0 {
                out.push(FiniteWord::from_bits(a[1..].to_vec()).unwrap_or_default());
            }
            return;
        }
        a[t] = a[t - p];
        gen(t + 1, p, n, a, out);
        for j in a[t - p] + 1..2 {
            a[t] = j;
            gen(t + 1, t, n, a, out);
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        gen(1, 1, n, &mut vec![0; n + 1], &mut out);
    }
    out
}

fn trace_of(u: &FiniteWord) -> u64 {
    u.bits()
        .iter()
        .fold(M2::ID, |m, &s| m.push(s as u64))
        .trace()
}

/// Necklaces of length `n` maximising `(p ln alpha + ln rho) / n`, where `p`
/// is the number of ones. At `alpha = 1` the comparison between ones counts
/// is exact on traces; otherwise every ones count whose value cannot be
/// separated from the best is kept.
pub fn extremal_witnesses(alpha: &RealBall, n: usize) -> Result<Vec<FiniteWord>> {
    if !(2..=MAX_DEPTH).contains(&n) {
        return Err(Error::Parameter(format!(
            "witness length must lie in 2..={MAX_DEPTH}, got {n}"
        )));
    }
    let param = AlphaParam::from_ball(alpha)?;
    let all = necklaces(n);
    let mut best_trace = vec![0u64; n + 1];
    for u in &all {
        let p = u.ones_count();
        best_trace[p] = best_trace[p].max(trace_of(u));
    }
    let optimal: Vec<usize> = if param.is_one() {
        let t = *best_trace.iter().max().unwrap_or(&0);
        (0..=n).filter(|&p| best_trace[p] == t).collect()
    } else {
        let policy = PrecisionPolicy::default();
        policy.decide("extremal ones count", |prec| {
            let ln_alpha = param.ln_at(prec)?;
            let mut vals = Vec::new();
            for (p, &t) in best_trace.iter().enumerate() {
                let g = log_rho_from_trace(&BigInt::from(t), prec)?;
                if let Some(v) = tilt(g, &ln_alpha, n, p)? {
                    vals.push((p, v));
                }
            }
            let top = vals
                .iter()
                .map(|(_, v)| v.clone())
                .reduce(|a, b| a.max(&b))
                .ok_or_else(|| Error::Internal("no candidates".into()))?;
            let keep: Vec<usize> = vals
                .iter()
                .filter(|(_, v)| !v.certainly_lt(&top))
                .map(|(p, _)| *p)
                .collect();
            // Retry at higher precision while candidates remain unseparated.
            let settled = keep.len() == 1 || prec >= policy.max_bits;
            Ok(settled.then_some(keep))
        })?
    };
    Ok(all
        .into_iter()
        .filter(|u| {
            let p = u.ones_count();
            optimal.contains(&p) && trace_of(u) == best_trace[p]
        })
        .collect())
}
