//! Finite binary words.
//!
//! Words are stored one symbol per byte and print as strings of `'0'` and
//! `'1'`. Lexicographic comparison is only defined between words of equal
//! length.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::Fraction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord {
    bits: Vec<u8>,
}

impl FiniteWord {
    pub fn empty() -> Self {
        FiniteWord::default()
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(b))));
        }
        Ok(FiniteWord { bits })
    }

    /// Word of length `n` whose i-th symbol is bit `n-1-i` of `code`.
    pub fn from_code(code: u64, n: usize) -> Self {
        debug_assert!(n <= 64);
        FiniteWord {
            bits: (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect(),
        }
    }

    pub fn repeat(symbol: u8, n: usize) -> Self {
        FiniteWord {
            bits: vec![symbol & 1; n],
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        FiniteWord { bits }
    }

    pub fn pow(&self, k: usize) -> FiniteWord {
        FiniteWord {
            bits: self.bits.repeat(k),
        }
    }

    /// The factor `u[start..end]`.
    pub fn slice(&self, start: usize, end: usize) -> FiniteWord {
        FiniteWord {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn ones_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Proportion of ones, in lowest terms.
    pub fn one_ratio(&self) -> Result<Fraction> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Fraction::new(
            BigInt::from(self.ones_count()),
            BigInt::from(self.len()),
        ))
    }

    pub fn reverse(&self) -> FiniteWord {
        let mut bits = self.bits.clone();
        bits.reverse();
        FiniteWord { bits }
    }

    pub fn is_palindrome(&self) -> bool {
        self.bits.iter().eq(self.bits.iter().rev())
    }

    pub fn lex_compare(&self, other: &FiniteWord) -> Result<Ordering> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.bits.cmp(&other.bits))
    }

    /// Cyclic shift moving the first `k` symbols to the end.
    pub fn rotate(&self, k: usize) -> FiniteWord {
        let mut bits = self.bits.clone();
        if !bits.is_empty() {
            bits.rotate_left(k % self.len());
        }
        FiniteWord { bits }
    }

    /// All cyclic shifts, in shift order (may contain repeats).
    pub fn rotations(&self) -> Vec<FiniteWord> {
        (0..self.len().max(1)).map(|k| self.rotate(k)).collect()
    }

    /// Lexicographically least cyclic shift.
    pub fn canonical_rotation(&self) -> FiniteWord {
        self.rotations().into_iter().min().unwrap_or_default()
    }

    /// Length of the longest run of `symbol`.
    pub fn max_run(&self, symbol: u8) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for &b in &self.bits {
            if b == symbol {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        best
    }

    /// Whether `v` occurs as a factor.
    pub fn contains(&self, v: &FiniteWord) -> bool {
        v.is_empty() || self.bits.windows(v.len()).any(|w| w == v.bits.as_slice())
    }

    /// Maximal runs as `(symbol, length)` pairs.
    pub fn runs(&self) -> Vec<(u8, usize)> {
        let mut out: Vec<(u8, usize)> = Vec::new();
        for &b in &self.bits {
            match out.last_mut() {
                Some((s, n)) if *s == b => *n += 1,
                _ => out.push((b, 1)),
            }
        }
        out
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(FiniteWord { bits })
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

/// The infinite word `period^inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicWordSpec {
    period: FiniteWord,
}

impl PeriodicWordSpec {
    pub fn new(period: FiniteWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(PeriodicWordSpec { period })
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    pub fn prefix(&self, n: usize) -> FiniteWord {
        let p = self.period.bits();
        FiniteWord {
            bits: (0..n).map(|i| p[i % p.len()]).collect(),
        }
    }

    pub fn is_balanced(&self) -> bool {
        is_power_balanced(&self.period).unwrap_or(false)
    }
}

/// Window-extremes test: for every length, the number of ones in factors
/// of that length varies by at most one.
pub fn is_balanced(u: &FiniteWord) -> bool {
    let b = u.bits();
    let n = b.len();
    let mut prefix = vec![0usize; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + b[i] as usize;
    }
    for len in 1..n {
        let mut lo = usize::MAX;
        let mut hi = 0;
        for i in 0..=n - len {
            let c = prefix[i + len] - prefix[i];
            lo = lo.min(c);
            hi = hi.max(c);
        }
        if hi - lo > 1 {
            return false;
        }
    }
    true
}

/// `u^2` balanced; equivalently every rotation of `u` and `u^inf` are balanced.
pub fn is_power_balanced(u: &FiniteWord) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(is_balanced(&u.pow(2)))
}

fn check_ratio(p: u64, q: u64) -> Result<()> {
    if q == 0 || p > q {
        return Err(Error::Parameter(format!("need 0 <= p <= q, q >= 1; got {p}/{q}")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Parameter(format!("{p}/{q} is not in lowest terms")));
    }
    Ok(())
}

/// Lower mechanical word of slope `p/q` and intercept `shift/q`, one period.
pub fn mechanical_periodic(p: u64, q: u64, shift: u64) -> Result<FiniteWord> {
    check_ratio(p, q)?;
    if shift >= q {
        return Err(Error::Parameter(format!("shift {shift} must be below {q}")));
    }
    let fl = |k: u64| (k as u128 * p as u128) / q as u128;
    let bits = (1..=q)
        .map(|n| (fl(n + shift + 1) - fl(n + shift)) as u8)
        .collect();
    Ok(FiniteWord { bits })
}

/// The `q` distinct periods of balanced recurrent words with one-ratio `p/q`,
/// sorted.
pub fn enumerate_x(p: u64, q: u64) -> Result<Vec<FiniteWord>> {
    let base = mechanical_periodic(p, q, 0)?;
    let set: BTreeSet<FiniteWord> = base.rotations().into_iter().collect();
    Ok(set.into_iter().collect())
}

/// `u(1) = 1`, `u(2) = 0`, `u(n+1) = u(n) u(n-1)`.
pub fn fibonacci_word(n: usize) -> Result<FiniteWord> {
    if n == 0 {
        return Err(Error::Parameter("Fibonacci word index starts at 1".into()));
    }
    let mut prev: FiniteWord = "1".parse()?;
    if n == 1 {
        return Ok(prev);
    }
    let mut cur: FiniteWord = "0".parse()?;
    for _ in 2..n {
        let next = cur.concat(&prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Closure of `(0, 1)` under `(u, v) -> (uv, v)` and `(u, v) -> (u, vu)`,
/// keeping pairs whose components both have length at most `max_len`.
pub fn standard_pairs(max_len: usize) -> BTreeSet<(FiniteWord, FiniteWord)> {
    let mut seen = BTreeSet::new();
    if max_len == 0 {
        return seen;
    }
    let start = (FiniteWord::repeat(0, 1), FiniteWord::repeat(1, 1));
    let mut queue = VecDeque::from([start]);
    while let Some((u, v)) = queue.pop_front() {
        if !seen.insert((u.clone(), v.clone())) {
            continue;
        }
        if u.len() + v.len() <= max_len {
            queue.push_back((u.concat(&v), v.clone()));
            queue.push_back((u.clone(), v.concat(&u)));
        }
    }
    seen
}

/// Words `(a, w, b)` with `|a| = |b|` whose middle reversal raises the trace:
/// either `rev(a) > b` and `w > rev(w)`, or `rev(b) > a` and `rev(w) > w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuboptimalTriple {
    a: FiniteWord,
    w: FiniteWord,
    b: FiniteWord,
}

impl SuboptimalTriple {
    pub fn new(a: FiniteWord, w: FiniteWord, b: FiniteWord) -> Result<Self> {
        if a.is_empty() || w.is_empty() {
            return Err(Error::Precondition("a and w must be nonempty".into()));
        }
        let ab = a.reverse().lex_compare(&b)?;
        let ba = b.reverse().lex_compare(&a)?;
        let ww = w.lex_compare(&w.reverse())?;
        let first = ab == Ordering::Greater && ww == Ordering::Greater;
        let second = ba == Ordering::Greater && ww == Ordering::Less;
        if !(first || second) {
            return Err(Error::Precondition(format!(
                "({a}, {w}, {b}) is not a suboptimal triple"
            )));
        }
        Ok(SuboptimalTriple { a, w, b })
    }

    pub fn a(&self) -> &FiniteWord {
        &self.a
    }

    pub fn w(&self) -> &FiniteWord {
        &self.w
    }

    pub fn b(&self) -> &FiniteWord {
        &self.b
    }

    /// `a w b`.
    pub fn joined(&self) -> FiniteWord {
        self.a.concat(&self.w).concat(&self.b)
    }
}

/// For an unbalanced word, a suboptimal triple whose concatenation is a
/// factor of `u`; `None` for balanced words.
///
/// The shortest unbalanced window length `L` is located first. Among the
/// windows of that length with fewest ones (`0p0`) and most ones (`1p1`),
/// the leftmost non-overlapping pair is taken and the gap between them
/// becomes the middle of `w`.
pub fn find_suboptimal_triple(u: &FiniteWord) -> Option<SuboptimalTriple> {
    let b = u.bits();
    let n = b.len();
    let mut prefix = vec![0usize; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + b[i] as usize;
    }
    for len in 2..n {
        let counts: Vec<usize> = (0..=n - len).map(|i| prefix[i + len] - prefix[i]).collect();
        let lo = *counts.iter().min()?;
        let hi = *counts.iter().max()?;
        if hi - lo < 2 {
            continue;
        }
        let mins: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == lo).collect();
        let maxs: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == hi).collect();
        let mut pairs: Vec<(usize, usize)> = mins
            .iter()
            .flat_map(|&i| maxs.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| i.abs_diff(j) >= len)
            .collect();
        pairs.sort_by_key(|&(i, j)| (i.min(j), i.max(j)));
        let &(i, j) = pairs.first()?;
        let p = u.slice(i + 1, i + len - 1);
        let (a, w, b) = if i < j {
            let v = u.slice(i + len, j);
            (
                FiniteWord::repeat(0, 1).concat(&p),
                FiniteWord::repeat(0, 1).concat(&v).concat(&FiniteWord::repeat(1, 1)),
                p.concat(&FiniteWord::repeat(1, 1)),
            )
        } else {
            let v = u.slice(j + len, i);
            (
                FiniteWord::repeat(1, 1).concat(&p),
                FiniteWord::repeat(1, 1).concat(&v).concat(&FiniteWord::repeat(0, 1)),
                p.concat(&FiniteWord::repeat(0, 1)),
            )
        };
        return SuboptimalTriple::new(a, w, b).ok();
    }
    None
}
