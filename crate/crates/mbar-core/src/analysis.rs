//! The checks: unimodality, binomial-normalized (ultra) log-concavity,
//! real-rootedness via Sturm chains, the one-term asymptotic with its exact
//! error functional, and empirical probes for the effective constants.
//!
//! Everything is exact. The only place a real number even threatens to appear
//! is the admissibility rule `l <= n / (10 ln n)` for asymptotic scans, and
//! there `ln n` is bracketed by rational bounds (iterated square roots plus
//! the rational bounds `2(y-1)/(y+1) <= ln y <= (y^2-1)/(2y)`), so the
//! comparison is still exact.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::comb::{binomial, factorial, PowerSumMemo, StirlingMemo};
use crate::error::{Error, Result};
use crate::formulas::{class_via_stirling_with, resolve_convention, CnkiMemos, Method};
use crate::lpoly::{BettiTable, LPolynomial};
use crate::strata::class_via_strata;

/// True iff the sequence weakly rises and then weakly falls.
pub fn is_unimodal(seq: &[BigInt]) -> bool {
    let mut i = 0;
    while i + 1 < seq.len() && seq[i] <= seq[i + 1] {
        i += 1;
    }
    while i + 1 < seq.len() && seq[i] >= seq[i + 1] {
        i += 1;
    }
    i + 1 >= seq.len()
}

/// Weak log-concavity of a rational sequence: `a_l^2 >= a_{l-1} a_{l+1}`.
pub fn is_log_concave(seq: &[BigRational]) -> bool {
    (1..seq.len().saturating_sub(1)).all(|l| &seq[l] * &seq[l] >= &seq[l - 1] * &seq[l + 1])
}

/// The binomial-normalized rank sequence `rank[l] / binomial(n-3, l)`.
pub fn normalized_ranks(table: &BettiTable) -> Vec<BigRational> {
    let d = table.n() as u64 - 3;
    table
        .ranks()
        .iter()
        .enumerate()
        .map(|(l, r)| BigRational::new(r.clone(), binomial(d, l as i64)))
        .collect()
}

/// One compared pair of the normalized log-concavity inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlcEntry {
    pub l: u32,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlcReport {
    pub n: u32,
    pub per_l: Vec<UlcEntry>,
    pub all_hold: bool,
}

/// For each `2 <= l <= n-3`, compare exactly
/// `(rank[l-1]/binom(n-3,l-1))^2 >= rank[l-2] rank[l] / (binom(n-3,l-2) binom(n-3,l))`.
/// Vacuously true when `n <= 4` (no `l` in range).
pub fn ulc_check(table: &BettiTable) -> UlcReport {
    let n = table.n();
    let d = n as u64 - 3;
    let mut per_l = Vec::new();
    let mut all_hold = true;
    for l in 2..=n.saturating_sub(3) {
        let normalized = BigRational::new(table.rank(l - 1), binomial(d, l as i64 - 1));
        let lhs = &normalized * &normalized;
        let rhs = BigRational::new(
            table.rank(l - 2) * table.rank(l),
            binomial(d, l as i64 - 2) * binomial(d, l as i64),
        );
        let holds = lhs >= rhs;
        all_hold &= holds;
        per_l.push(UlcEntry { l, lhs, rhs, holds });
    }
    UlcReport { n, per_l, all_hold }
}

// ---------------------------------------------------------------------------
// Sturm chains over exact rationals with primitive-part rescaling
// ---------------------------------------------------------------------------

fn to_rational_vec(p: &LPolynomial) -> Vec<BigRational> {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn trim_rational(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Remainder of rational polynomial division.
fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = &r[dr] / lead;
        for t in 0..=db {
            let v = &b[t] * &factor;
            r[dr - db + t] -= v;
        }
        trim_rational(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Quotient of an exact rational polynomial division (remainder must vanish).
fn rat_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); a.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = &r[dr] / lead;
        q[dr - db] = factor.clone();
        for t in 0..=db {
            let v = &b[t] * &factor;
            r[dr - db + t] -= v;
        }
        trim_rational(&mut r);
        if r.is_empty() {
            break;
        }
    }
    debug_assert!(r.is_empty(), "division was not exact");
    q
}

/// Rescale a rational polynomial by a positive constant into an integer
/// polynomial with coprime coefficients; signs are preserved.
fn to_primitive_integer(v: &[BigRational]) -> LPolynomial {
    if v.is_empty() {
        return LPolynomial::zero();
    }
    let mut den_lcm = BigInt::one();
    for c in v {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    LPolynomial::from_coeffs(ints.into_iter().map(|c| c / &content).collect())
}

fn primitive_part(p: &LPolynomial) -> LPolynomial {
    if p.is_zero() {
        return LPolynomial::zero();
    }
    let mut content = BigInt::zero();
    for c in p.coeffs() {
        content = content.gcd(c);
    }
    LPolynomial::from_coeffs(p.coeffs().iter().map(|c| c / &content).collect())
}

/// The canonical chain: `p`, `p'`, then negated remainders, with every
/// element rescaled to primitive integer form (a positive rescale, so sign
/// variations are untouched).
fn sturm_chain(p: &LPolynomial) -> Vec<LPolynomial> {
    let p0 = primitive_part(p);
    if p0.degree().is_none_or(|d| d == 0) {
        return vec![p0];
    }
    let mut chain = vec![p0.clone(), primitive_part(&p0.derivative())];
    loop {
        let a = to_rational_vec(&chain[chain.len() - 2]);
        let b = to_rational_vec(&chain[chain.len() - 1]);
        let mut r = rat_rem(&a, &b);
        if r.is_empty() {
            break;
        }
        for c in &mut r {
            *c = -c.clone();
        }
        chain.push(to_primitive_integer(&r));
    }
    chain
}

fn sign_variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut count = 0;
    let mut prev: Option<Sign> = None;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if let Some(p) = prev {
            if p != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    count
}

/// Number of distinct real roots of a nonzero polynomial, by Sturm's theorem
/// (sign-variation counts at minus and plus infinity). Multiple roots are
/// counted once; the zero polynomial returns 0.
///
/// ```
/// use mbar_core::analysis::sturm_count;
/// use mbar_core::LPolynomial;
/// assert_eq!(sturm_count(&LPolynomial::from_i64(&[-2, 0, 1])), 2);
/// assert_eq!(sturm_count(&LPolynomial::from_i64(&[1, 0, 1])), 0);
/// ```
pub fn sturm_count(p: &LPolynomial) -> usize {
    if p.is_zero() {
        return 0;
    }
    let chain = sturm_chain(p);
    let at_pos = chain.iter().map(|q| match q.leading_coeff() {
        Some(c) => c.sign(),
        None => Sign::NoSign,
    });
    let at_neg = chain.iter().map(|q| match (q.leading_coeff(), q.degree()) {
        (Some(c), Some(d)) if d % 2 == 1 => -c.sign(),
        (Some(c), _) => c.sign(),
        _ => Sign::NoSign,
    });
    sign_variations(at_neg) - sign_variations(at_pos)
}

/// Greatest common divisor of two integer polynomials, primitive with a
/// positive leading coefficient.
pub fn poly_gcd(a: &LPolynomial, b: &LPolynomial) -> LPolynomial {
    let mut a = primitive_part(a);
    let mut b = primitive_part(b);
    while !b.is_zero() {
        let r = rat_rem(&to_rational_vec(&a), &to_rational_vec(&b));
        a = b;
        b = to_primitive_integer(&r);
    }
    if a.leading_coeff().is_some_and(|c| c.is_negative()) {
        -&a
    } else {
        a
    }
}

/// `p` divided by `gcd(p, p')`: same roots, all simple, primitive integer
/// coefficients.
pub fn squarefree_part(p: &LPolynomial) -> LPolynomial {
    if p.is_zero() {
        return LPolynomial::zero();
    }
    let prim = primitive_part(p);
    if prim.degree() == Some(0) {
        return prim;
    }
    let g = poly_gcd(&prim, &prim.derivative());
    if g.degree() == Some(0) {
        return prim;
    }
    let q = rat_div_exact(&to_rational_vec(&prim), &to_rational_vec(&g));
    to_primitive_integer(&q)
}

/// True iff every complex root of `p` is real: the squarefree part must have
/// as many distinct real roots as its degree. Nonzero constants count as
/// (vacuously) real-rooted.
pub fn is_real_rooted(p: &LPolynomial) -> bool {
    if p.is_zero() {
        return false;
    }
    let q = squarefree_part(p);
    match q.degree() {
        Some(d) => sturm_count(&q) == d,
        None => false,
    }
}

// ---------------------------------------------------------------------------
// The one-term asymptotic and its exact error functional
// ---------------------------------------------------------------------------

/// The approximation `(l+1)^{l+n-1} / (l+1)!` of the rank in degree `2l`.
pub fn main_term(n: u32, l: u32) -> BigRational {
    BigRational::new(BigInt::from(l + 1).pow(l + n - 1), factorial(l as u64 + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticEntry {
    pub n: u32,
    pub l: u32,
    /// `rank * (l+1)! / (l+1)^{l+n-1} - 1`, signed and exact.
    pub ratio_minus_one: BigRational,
    /// `n^2 * |ratio - 1|`.
    pub scaled: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticReport {
    pub entries: Vec<AsymptoticEntry>,
    /// Least tested `n` from which every tested `n' >= n` has
    /// `|ratio - 1| <= 1/n'^2`; `None` if no suffix qualifies.
    pub empirical_n: Option<u32>,
}

/// Exact ratio table of rank against the one-term approximation, for a fixed
/// `l` over a set of `n` values (sorted and deduplicated).
///
/// Admissibility: for `l >= 3` every `n` must satisfy `10 l ln(n) <= n`; the
/// small degrees `l <= 2` are always admitted (the scan is well defined for
/// them and they are where the decay is cheapest to observe). Each `n` must
/// also satisfy `l <= n-3` for the rank to exist.
pub fn asymptotic_scan(l: u32, ns: &[u32], method: Method) -> Result<AsymptoticReport> {
    let mut ns: Vec<u32> = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::Range {
            what: "empty n range".into(),
        });
    }
    for &n in &ns {
        if n < 3 || l > n - 3 {
            return Err(Error::Range {
                what: format!("l={l} out of range 0..={} for n={n}", n.saturating_sub(3)),
            });
        }
        if !l_admissible(n, l) {
            return Err(Error::Range {
                what: format!("l={l} exceeds n/(10 ln n) for n={n}"),
            });
        }
    }

    let mut cnki_memos = CnkiMemos::new();
    let mut stirling_memo = StirlingMemo::new();
    let conv = match method {
        Method::Stirling => Some(resolve_convention(6)?),
        _ => None,
    };

    let mut entries = Vec::with_capacity(ns.len());
    for &n in &ns {
        let rank = match method {
            Method::Cnki => crate::formulas::betti_via_cnki_with(&mut cnki_memos, n, l)?,
            Method::Stirling => {
                let conv = conv.as_ref().expect("resolved above");
                class_via_stirling_with(&mut stirling_memo, n, conv)?.coeff(l as usize)
            }
            Method::Strata => class_via_strata(n)?.coeff(l as usize),
        };
        let ratio = BigRational::new(
            rank * factorial(l as u64 + 1),
            BigInt::from(l + 1).pow(l + n - 1),
        );
        let ratio_minus_one = ratio - BigRational::one();
        let scaled =
            BigRational::from_integer(BigInt::from(n) * BigInt::from(n)) * ratio_minus_one.abs();
        entries.push(AsymptoticEntry {
            n,
            l,
            ratio_minus_one,
            scaled,
        });
    }

    let mut empirical_n = None;
    for e in entries.iter().rev() {
        let bound = BigRational::new(BigInt::one(), BigInt::from(e.n) * BigInt::from(e.n));
        if e.ratio_minus_one.abs() <= bound {
            empirical_n = Some(e.n);
        } else {
            break;
        }
    }

    Ok(AsymptoticReport {
        entries,
        empirical_n,
    })
}

/// Is `(n, l)` inside the admissible range? `l <= 2` always; otherwise
/// requires `10 l ln(n) <= n`, decided with exact rational brackets of
/// `ln n` at escalating precision.
pub fn l_admissible(n: u32, l: u32) -> bool {
    if l <= 2 {
        return true;
    }
    let target = BigRational::new(BigInt::from(n), BigInt::from(10 * l as u64));
    for precision in 1..=6 {
        let (lo, hi) = ln_bounds(n as u64, precision);
        if hi <= target {
            return true;
        }
        if lo > target {
            return false;
        }
    }
    // brackets never stayed indecisive at desk scale; reject conservatively
    false
}

/// Rational brackets `lo <= ln n <= hi`.
///
/// Take `2^k`-th roots by iterated integer square roots (scaled by `2^s` for
/// precision), bringing `n` down to `y` near 1, then apply the rational
/// bounds `2(y-1)/(y+1) <= ln y <= (y^2-1)/(2y)` and scale back by `2^k`.
pub fn ln_bounds(n: u64, precision: u32) -> (BigRational, BigRational) {
    assert!(n >= 1);
    if n == 1 {
        return (BigRational::zero(), BigRational::zero());
    }
    let halvings = 4 + 2 * precision;
    let scale_bits = 16 + 16 * precision;
    let mut lo = BigRational::from_integer(BigInt::from(n));
    let mut hi = lo.clone();
    for _ in 0..halvings {
        lo = sqrt_bounds(&lo, scale_bits).0;
        hi = sqrt_bounds(&hi, scale_bits).1;
    }
    let two_pow_k = BigRational::from_integer(BigInt::one() << halvings);
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let ln_lo = &two_pow_k * &two * (&lo - &one) / (&lo + &one);
    let ln_hi = two_pow_k * (&hi * &hi - &one) / (two * hi);
    (ln_lo, ln_hi)
}

/// `(floor, ceil)`-style rational brackets of the square root of a positive
/// rational, with `scale_bits` bits of precision.
fn sqrt_bounds(x: &BigRational, scale_bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << scale_bits;
    let inner = x.numer() * x.denom() * &scale * &scale;
    let root = inner.sqrt();
    let den = x.denom() * scale;
    (
        BigRational::new(root.clone(), den.clone()),
        BigRational::new(root + 1, den),
    )
}

// ---------------------------------------------------------------------------
// Probes for the effective constants
// ---------------------------------------------------------------------------

/// Cap on `k` as a function of `n` in the probe grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KCap {
    Fixed(u32),
    /// `k <= n` (covers every `k <= l <= n` the rank formula can reach).
    UpToN,
}

impl KCap {
    fn cap(&self, n: u32) -> u32 {
        match self {
            KCap::Fixed(k) => *k,
            KCap::UpToN => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeGrid {
    pub n_min: u32,
    pub n_max: u32,
    pub k_cap: KCap,
    pub i_max: u32,
}

/// The empirical supremum of `|C_{nki}| / n^{i+1}` over a grid, with the grid
/// point attaining it. This is a surrogate for the effective constant of the
/// growth bound `|C_{nki}| <= C n^{i+1}`, not that constant itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub sup_value: BigRational,
    pub argmax: (u32, u32, u32),
    pub grid: ProbeGrid,
}

pub fn cnki_constant_probe(grid: ProbeGrid) -> ProbeReport {
    let mut memos = CnkiMemos::new();
    let mut sup_value = BigRational::zero();
    let mut argmax = (0, 0, 0);
    for n in grid.n_min..=grid.n_max {
        for k in 0..=grid.k_cap.cap(n) {
            for i in 1..=grid.i_max {
                let v = memos.cnki(n, k, i).abs()
                    / BigRational::from_integer(BigInt::from(n).pow(i + 1));
                if v > sup_value {
                    sup_value = v;
                    argmax = (n, k, i);
                }
            }
        }
    }
    ProbeReport {
        sup_value,
        argmax,
        grid,
    }
}

/// Ranges over which [`proof_bound_checks`] verifies the two elementary
/// estimates the error analysis rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProofBoundRanges {
    pub i_max: u32,
    pub k_max: u32,
    pub n_min: u32,
    pub n_max: u32,
    pub t_max: u32,
}

impl Default for ProofBoundRanges {
    fn default() -> Self {
        ProofBoundRanges {
            i_max: 10,
            k_max: 20,
            n_min: 4,
            n_max: 60,
            t_max: 20,
        }
    }
}

/// Verify, exactly, over the given ranges:
///
/// * the integral bound `sum_{j=0}^{k+n-2} j^i <= (k+n-1)^{i+1} / (i+1)`
///   (compared with denominators cleared, which is the same inequality);
/// * the tuple-count bound `binomial(t-1, m-1) <= 2^{t+m-1} <= 4^t`
///   for `1 <= m <= t`.
pub fn proof_bound_checks(ranges: &ProofBoundRanges) -> bool {
    let mut power_sums = PowerSumMemo::new();
    for i in 1..=ranges.i_max {
        for k in 0..=ranges.k_max {
            for n in ranges.n_min..=ranges.n_max {
                let upper = k as u64 + n as u64 - 2;
                let lhs = power_sums.sum(upper, i) * BigInt::from(i + 1);
                let rhs = BigInt::from(upper + 1).pow(i + 1);
                if lhs > rhs {
                    return false;
                }
            }
        }
    }
    for t in 1..=ranges.t_max {
        for m in 1..=t {
            let count = binomial(t as u64 - 1, m as i64 - 1);
            let mid = BigInt::from(2).pow(t + m - 1);
            let top = BigInt::from(4).pow(t);
            if count > mid || mid > top {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{betti_table, cnki};

    fn p(coeffs: &[i64]) -> LPolynomial {
        LPolynomial::from_i64(coeffs)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unimodality() {
        assert!(is_unimodal(&big(&[1, 5, 1])));
        assert!(!is_unimodal(&big(&[1, 2, 1, 2])));
        assert!(is_unimodal(&big(&[1, 16, 16, 1])));
        assert!(is_unimodal(&big(&[1])));
        assert!(is_unimodal(&big(&[3, 3, 3])));
        assert!(is_unimodal(&big(&[5, 4, 3])));
        assert!(is_unimodal(&big(&[1, 2, 3])));
    }

    #[test]
    fn ulc_hand_checked_values() {
        let t6 = p(&[1, 16, 16, 1]).to_betti_table(6).unwrap();
        let r = ulc_check(&t6);
        assert!(r.all_hold);
        let e2 = &r.per_l[0];
        assert_eq!(e2.l, 2);
        assert_eq!(e2.lhs, BigRational::new(BigInt::from(256), BigInt::from(9)));
        assert_eq!(e2.rhs, BigRational::new(BigInt::from(48), BigInt::from(9)));

        let t5 = p(&[1, 5, 1]).to_betti_table(5).unwrap();
        let r = ulc_check(&t5);
        assert!(r.all_hold);
        assert_eq!(
            r.per_l[0].lhs,
            BigRational::new(BigInt::from(25), BigInt::from(4))
        );
        assert_eq!(r.per_l[0].rhs, BigRational::one());
    }

    #[test]
    fn ulc_vacuous_below_n5() {
        let t4 = p(&[1, 1]).to_betti_table(4).unwrap();
        let r = ulc_check(&t4);
        assert!(r.all_hold);
        assert!(r.per_l.is_empty());
    }

    #[test]
    fn ulc_flags_a_bad_table() {
        // [1,1,10,1,1] passes the betti invariants but is nowhere near
        // normalized log-concave
        let bad = BettiTable::new(7, big(&[1, 1, 10, 1, 1])).unwrap();
        let r = ulc_check(&bad);
        assert!(!r.all_hold);
        assert!(r.per_l.iter().any(|e| !e.holds));
    }

    #[test]
    fn ulc_agrees_with_normalized_log_concavity() {
        for n in 3..=12 {
            let t = betti_table(n, Method::Stirling).unwrap();
            assert_eq!(
                ulc_check(&t).all_hold,
                is_log_concave(&normalized_ranks(&t)),
                "n={n}"
            );
        }
    }

    #[test]
    fn sturm_counts_examples() {
        assert_eq!(sturm_count(&p(&[-2, 0, 1])), 2); // L^2 - 2
        assert_eq!(sturm_count(&p(&[1, 0, 1])), 0); // L^2 + 1
        assert_eq!(sturm_count(&p(&[1, 5, 1])), 2); // discriminant 21 > 0
        assert_eq!(sturm_count(&p(&[7])), 0);
        assert_eq!(sturm_count(&p(&[3, 2])), 1);
        assert_eq!(sturm_count(&LPolynomial::zero()), 0);
    }

    #[test]
    fn sturm_counts_distinct_roots_of_non_squarefree_inputs() {
        let cube = p(&[1, 1]).pow(3);
        assert_eq!(sturm_count(&cube), 1);
        // (L^2+1)^2 (L-3): one real root
        let q = &p(&[1, 0, 1]).pow(2) * &p(&[-3, 1]);
        assert_eq!(sturm_count(&q), 1);
        // (L-1)^2 (L+2)^3: two distinct
        let q = &p(&[-1, 1]).pow(2) * &p(&[2, 1]).pow(3);
        assert_eq!(sturm_count(&q), 2);
        // repeated root at zero
        assert_eq!(sturm_count(&p(&[0, 0, 1])), 1);
        assert_eq!(sturm_count(&(&p(&[0, 0, 1]) * &p(&[-1, 1]))), 2);
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&p(&[1, 1]).pow(3)), p(&[1, 1]));
        assert_eq!(squarefree_part(&p(&[1, 5, 1])), p(&[1, 5, 1]));
        assert_eq!(squarefree_part(&p(&[9])), p(&[1]));
        let q = &p(&[-1, 1]).pow(2) * &p(&[2, 1]).pow(3);
        assert_eq!(squarefree_part(&q), &p(&[-1, 1]) * &p(&[2, 1]));
    }

    #[test]
    fn real_rootedness_examples() {
        assert!(is_real_rooted(&p(&[1, 1]).pow(3)));
        assert!(!is_real_rooted(&p(&[1, 1, 1])));
        assert!(is_real_rooted(&p(&[1, 5, 1])));
        assert!(is_real_rooted(&p(&[1]))); // constants are vacuously real-rooted
        assert!(is_real_rooted(&p(&[1, 16, 16, 1])));
        assert!(!is_real_rooted(&(&p(&[1, 0, 1]).pow(2) * &p(&[-3, 1]))));
        assert!(!is_real_rooted(&LPolynomial::zero()));
    }

    #[test]
    fn real_rootedness_implies_unimodal_and_ulc_up_to_12() {
        // the Newton direction only: never assert the converse
        for n in 3..=12 {
            let t = betti_table(n, Method::Stirling).unwrap();
            if is_real_rooted(&t.class()) {
                assert!(is_unimodal(t.ranks()), "n={n}");
                assert!(ulc_check(&t).all_hold, "n={n}");
            }
        }
    }

    #[test]
    fn main_term_examples() {
        assert_eq!(main_term(7, 0), BigRational::one());
        assert_eq!(main_term(4, 1), BigRational::from_integer(BigInt::from(8)));
        assert_eq!(main_term(5, 1), BigRational::from_integer(BigInt::from(16)));
    }

    #[test]
    fn main_term_definition_unwind() {
        // main_term(n,l) * (l+1)! = (l+1)^{l+n-1}, on a spread of (n, l)
        let mut checked = 0;
        for n in (3..=60u32).step_by(3) {
            for l in 0..=4u32 {
                let lhs = main_term(n, l) * BigRational::from_integer(factorial(l as u64 + 1));
                let rhs = BigRational::from_integer(BigInt::from(l + 1).pow(l + n - 1));
                assert_eq!(lhs, rhs, "n={n}, l={l}");
                checked += 1;
            }
        }
        assert!(checked >= 100);
    }

    #[test]
    fn ln_bounds_bracket_the_logarithm() {
        for n in [2u64, 3, 5, 10, 40, 50, 100, 399, 400, 1000, 65536] {
            let (lo, hi) = ln_bounds(n, 2);
            let truth = (n as f64).ln();
            let lo_f = rational_to_f64(&lo);
            let hi_f = rational_to_f64(&hi);
            assert!(lo_f <= truth + 1e-12, "n={n}: lo={lo_f} > ln={truth}");
            assert!(hi_f >= truth - 1e-12, "n={n}: hi={hi_f} < ln={truth}");
            assert!(hi_f - lo_f < 1e-2 * truth.max(1.0), "n={n}: loose bracket");
        }
    }

    fn rational_to_f64(r: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        r.to_f64().expect("fits after reduction")
    }

    #[test]
    fn admissibility_matches_the_float_rule_away_from_the_boundary() {
        assert!(l_admissible(50, 0));
        assert!(l_admissible(4, 1));
        assert!(l_admissible(50, 2));
        assert!(!l_admissible(40, 30));
        for n in (10..=600u32).step_by(7) {
            for l in 3..=8u32 {
                let stat = 10.0 * l as f64 * (n as f64).ln() - n as f64;
                if stat.abs() > 0.5 {
                    assert_eq!(l_admissible(n, l), stat <= 0.0, "n={n}, l={l}");
                }
            }
        }
    }

    #[test]
    fn asymptotic_scan_degree_zero_is_exact() {
        let r = asymptotic_scan(0, &[10, 20, 30, 40, 50], Method::Cnki).unwrap();
        assert!(r.entries.iter().all(|e| e.ratio_minus_one.is_zero()));
        assert_eq!(r.empirical_n, Some(10));
    }

    #[test]
    fn asymptotic_scan_small_case() {
        let r = asymptotic_scan(1, &[4], Method::Cnki).unwrap();
        assert_eq!(r.entries.len(), 1);
        // rank 1 against main term 8
        assert_eq!(
            r.entries[0].ratio_minus_one.abs(),
            BigRational::new(BigInt::from(7), BigInt::from(8))
        );
        assert_eq!(r.empirical_n, None);
    }

    #[test]
    fn asymptotic_scan_rejects_out_of_range() {
        assert!(matches!(
            asymptotic_scan(30, &[40], Method::Cnki),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            asymptotic_scan(2, &[4], Method::Cnki),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            asymptotic_scan(0, &[], Method::Cnki),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn asymptotic_methods_agree_where_all_are_defined() {
        for method in [Method::Cnki, Method::Stirling, Method::Strata] {
            let r = asymptotic_scan(1, &[5, 6, 7], method).unwrap();
            let vals: Vec<BigRational> = r
                .entries
                .iter()
                .map(|e| e.ratio_minus_one.clone())
                .collect();
            let expect = asymptotic_scan(1, &[5, 6, 7], Method::Cnki)
                .unwrap()
                .entries
                .iter()
                .map(|e| e.ratio_minus_one.clone())
                .collect::<Vec<_>>();
            assert_eq!(vals, expect, "{method:?}");
        }
    }

    #[test]
    fn probe_hand_values() {
        let grid = ProbeGrid {
            n_min: 4,
            n_max: 4,
            k_cap: KCap::Fixed(0),
            i_max: 1,
        };
        let r = cnki_constant_probe(grid);
        assert_eq!(
            r.sup_value,
            BigRational::new(BigInt::from(7), BigInt::from(16))
        );
        assert_eq!(r.argmax, (4, 0, 1));

        let grid = ProbeGrid {
            n_min: 5,
            n_max: 5,
            k_cap: KCap::Fixed(0),
            i_max: 1,
        };
        assert_eq!(
            cnki_constant_probe(grid).sup_value,
            BigRational::new(BigInt::from(11), BigInt::from(25))
        );
    }

    #[test]
    fn probe_sup_dominates_every_grid_point() {
        let grid = ProbeGrid {
            n_min: 4,
            n_max: 12,
            k_cap: KCap::UpToN,
            i_max: 4,
        };
        let r = cnki_constant_probe(grid);
        for n in 4..=12 {
            for k in 0..=n {
                for i in 1..=4 {
                    let v = cnki(n, k, i).value.abs()
                        / BigRational::from_integer(BigInt::from(n).pow(i + 1));
                    assert!(v <= r.sup_value, "n={n}, k={k}, i={i}");
                }
            }
        }
        let (n, k, i) = r.argmax;
        assert_eq!(
            cnki(n, k, i).value.abs() / BigRational::from_integer(BigInt::from(n).pow(i + 1)),
            r.sup_value
        );
    }

    #[test]
    fn proof_bounds_small_and_spot() {
        // (k=0, n=4, i=1): 3 <= 27/2, and (t=4, m=2): 3 <= 32 <= 256
        let small = ProofBoundRanges {
            i_max: 1,
            k_max: 0,
            n_min: 4,
            n_max: 4,
            t_max: 4,
        };
        assert!(proof_bound_checks(&small));
        assert!(proof_bound_checks(&ProofBoundRanges {
            i_max: 4,
            k_max: 6,
            n_min: 4,
            n_max: 20,
            t_max: 12,
        }));
    }
}
