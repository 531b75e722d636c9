//! Exact combinatorial primitives: binomials, factorials, power sums,
//! Stirling numbers of both kinds, and compositions (ordered tuples of
//! positive integers with a prescribed sum).
//!
//! Everything returns arbitrary-precision integers; nothing here can
//! overflow. The Stirling numbers of the first kind are the *signed* ones,
//! `s(a,b) = (-1)^{a-b} c(a,b)`, which is what the class formulas consume.
//!
//! The free functions recompute from scratch on every call. Callers that
//! evaluate many values of comparable size (the class formulas, parameter
//! scans) should hold a [`StirlingMemo`] / [`PowerSumMemo`] instead: the
//! tables are triangular, grown on demand, and readable through `&self`, so
//! a grown table can be shared across threads as an immutable snapshot.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

/// Exact binomial coefficient; `0` when `b < 0` or `b > a`.
pub fn binomial(a: u64, b: i64) -> BigInt {
    if b < 0 || b as u64 > a {
        return BigInt::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigInt::one();
    for t in 1..=b {
        acc = acc * BigInt::from(a - b + t) / BigInt::from(t);
    }
    acc
}

pub fn factorial(a: u64) -> BigInt {
    let mut acc = BigInt::one();
    for t in 2..=a {
        acc *= BigInt::from(t);
    }
    acc
}

/// `sum_{j=0}^{upper} j^i`, computed by the direct summation loop.
///
/// Exponent `i = 0` uses the convention `0^0 = 1`, though the formulas only
/// ever call this with `i >= 1`.
pub fn power_sum(upper: u64, i: u32) -> BigInt {
    if i == 0 {
        return BigInt::from(upper + 1);
    }
    let mut acc = BigInt::zero();
    for j in 1..=upper {
        acc += BigInt::from(j).pow(i);
    }
    acc
}

/// Signed Stirling number of the first kind `s(a,b)`, via the recurrence
/// `s(a,b) = s(a-1,b-1) - (a-1) s(a-1,b)` with `s(0,0) = 1`.
/// Out-of-range pairs (`b > a`) give `0`.
pub fn stirling_first_signed(a: u32, b: u32) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for ap in 1..=a {
        row = next_first_row(&row, ap);
    }
    row[b as usize].clone()
}

/// Stirling number of the second kind `S(a,b)`, via
/// `S(a,b) = S(a-1,b-1) + b S(a-1,b)` with `S(0,0) = 1`.
pub fn stirling_second(a: u32, b: u32) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for ap in 1..=a {
        row = next_second_row(&row, ap);
    }
    row[b as usize].clone()
}

fn next_first_row(prev: &[BigInt], a: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); a as usize + 1];
    let am1 = BigInt::from(a - 1);
    for b in 0..=a as usize {
        let mut v = BigInt::zero();
        if b >= 1 {
            v += &prev[b - 1];
        }
        if b < prev.len() {
            v -= &am1 * &prev[b];
        }
        row[b] = v;
    }
    row
}

fn next_second_row(prev: &[BigInt], a: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); a as usize + 1];
    for b in 0..=a as usize {
        let mut v = BigInt::zero();
        if b >= 1 {
            v += &prev[b - 1];
        }
        if b < prev.len() {
            v += BigInt::from(b) * &prev[b];
        }
        row[b] = v;
    }
    row
}

/// Triangular memo tables for both kinds of Stirling numbers.
///
/// Rows are grown on demand with [`ensure`](StirlingMemo::ensure); lookups
/// take `&self`, so concurrent readers are safe once the table has been grown
/// far enough (single-writer growth, many-reader queries).
#[derive(Debug, Clone, Default)]
pub struct StirlingMemo {
    first: Vec<Vec<BigInt>>,
    second: Vec<Vec<BigInt>>,
}

impl StirlingMemo {
    pub fn new() -> Self {
        StirlingMemo::default()
    }

    /// Number of rows currently held (values available for all `a < rows`).
    pub fn rows(&self) -> u32 {
        self.first.len() as u32
    }

    /// Grow both triangles so that every `a <= a_max` is answerable.
    pub fn ensure(&mut self, a_max: u32) {
        if self.first.is_empty() {
            self.first.push(vec![BigInt::one()]);
            self.second.push(vec![BigInt::one()]);
        }
        for a in self.first.len() as u32..=a_max {
            let f = next_first_row(&self.first[a as usize - 1], a);
            let s = next_second_row(&self.second[a as usize - 1], a);
            self.first.push(f);
            self.second.push(s);
        }
    }

    /// `s(a,b)`. The row for `a` must already be grown.
    pub fn first_signed(&self, a: u32, b: u32) -> BigInt {
        if b > a {
            return BigInt::zero();
        }
        self.first[a as usize][b as usize].clone()
    }

    /// `S(a,b)`. The row for `a` must already be grown.
    pub fn second(&self, a: u32, b: u32) -> BigInt {
        if b > a {
            return BigInt::zero();
        }
        self.second[a as usize][b as usize].clone()
    }
}

/// Prefix-sum cache for [`power_sum`], one row per exponent.
///
/// `row[i][u] = sum_{j=0}^{u} j^i`; a scan that sweeps `n` reuses every
/// previously accumulated prefix.
#[derive(Debug, Clone, Default)]
pub struct PowerSumMemo {
    rows: Vec<Vec<BigInt>>,
}

impl PowerSumMemo {
    pub fn new() -> Self {
        PowerSumMemo::default()
    }

    pub fn sum(&mut self, upper: u64, i: u32) -> BigInt {
        let i = i as usize;
        while self.rows.len() <= i {
            self.rows.push(Vec::new());
        }
        let row = &mut self.rows[i];
        if row.is_empty() {
            row.push(if i == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            });
        }
        while (row.len() as u64) <= upper {
            let j = row.len() as u64;
            let last = row.last().expect("row is nonempty").clone();
            row.push(last + BigInt::from(j).pow(i as u32));
        }
        row[upper as usize].clone()
    }
}

/// An ordered tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Iterate over every ordered tuple of `parts` positive integers summing to
/// `total`, each exactly once. Empty when `parts > total`. The number of
/// tuples is `binomial(total-1, parts-1)`.
pub fn compositions(total: u32, parts: u32) -> Compositions {
    Compositions::new(total, parts)
}

/// Iterator state: a composition of `total` into `parts` positive parts is a
/// set of `parts - 1` cut positions in `1..total`; cuts advance in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    total: u32,
    cuts: Option<Vec<u32>>,
}

impl Compositions {
    fn new(total: u32, parts: u32) -> Self {
        let cuts = if parts == 0 || parts > total {
            None
        } else {
            Some((1..parts).collect())
        };
        Compositions { total, cuts }
    }

    fn to_parts(&self, cuts: &[u32]) -> Composition {
        let mut parts = Vec::with_capacity(cuts.len() + 1);
        let mut prev = 0;
        for &c in cuts {
            parts.push(c - prev);
            prev = c;
        }
        parts.push(self.total - prev);
        Composition { parts }
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cuts = self.cuts.clone()?;
        let item = self.to_parts(&cuts);
        // Advance to the next cut set: bump the rightmost cut that has room,
        // then repack everything after it tightly.
        let cuts = self.cuts.as_mut()?;
        let k = cuts.len();
        let mut idx = None;
        for j in (0..k).rev() {
            let limit = self.total - (k - 1 - j) as u32 - 1;
            if cuts[j] < limit {
                idx = Some(j);
                break;
            }
        }
        match idx {
            Some(j) => {
                cuts[j] += 1;
                for t in j + 1..k {
                    cuts[t] = cuts[t - 1] + 1;
                }
            }
            None => self.cuts = None,
        }
        Some(item)
    }
}
