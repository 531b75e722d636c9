//! Polynomials in the Lefschetz class `L`, and the Betti-table view of a
//! class polynomial.
//!
//! A class polynomial is dense and small (degree `n-3`), so the
//! representation is simply a vector of big-integer coefficients, lowest
//! degree first, trimmed so the top stored coefficient is nonzero. Schoolbook
//! multiplication is plenty at these degrees.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in the Lefschetz class with exact integer coefficients.
///
/// Canonical form: no trailing zero coefficients; the zero polynomial stores
/// no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LPolynomial {
    coeffs: Vec<BigInt>,
}

impl LPolynomial {
    pub fn zero() -> Self {
        LPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        LPolynomial::from_coeffs(vec![c])
    }

    /// The monomial `L`.
    pub fn lefschetz() -> Self {
        LPolynomial::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    /// Build from coefficients in ascending degree, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        LPolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients in ascending degree (empty for zero).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.coeffs
            .get(degree)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn pow(&self, e: u32) -> LPolynomial {
        let mut acc = LPolynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact Horner evaluation at an integer point.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> LPolynomial {
        if self.coeffs.len() <= 1 {
            return LPolynomial::zero();
        }
        LPolynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| BigInt::from(d) * c)
                .collect(),
        )
    }

    /// Interpret the coefficients as the even Betti numbers of the `n`-marked
    /// space, validating every Betti-table invariant.
    pub fn to_betti_table(&self, n: u32) -> Result<BettiTable> {
        if n < 3 {
            return Err(Error::Domain {
                what: "betti tables need n >= 3".to_string(),
            });
        }
        let expect_deg = (n - 3) as usize;
        if self.degree() != Some(expect_deg) {
            return Err(Error::InvariantViolation {
                n,
                what: alloc::format!("degree is {:?}, expected {expect_deg}", self.degree()),
            });
        }
        BettiTable::new(n, self.coeffs.clone())
    }
}

impl Default for LPolynomial {
    fn default() -> Self {
        LPolynomial::zero()
    }
}

impl Add for &LPolynomial {
    type Output = LPolynomial;
    fn add(self, rhs: &LPolynomial) -> LPolynomial {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs[d] += c;
        }
        for (d, c) in rhs.coeffs.iter().enumerate() {
            coeffs[d] += c;
        }
        LPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &LPolynomial {
    type Output = LPolynomial;
    fn sub(self, rhs: &LPolynomial) -> LPolynomial {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs[d] += c;
        }
        for (d, c) in rhs.coeffs.iter().enumerate() {
            coeffs[d] -= c;
        }
        LPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &LPolynomial {
    type Output = LPolynomial;
    fn mul(self, rhs: &LPolynomial) -> LPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LPolynomial::from_coeffs(coeffs)
    }
}

impl Neg for &LPolynomial {
    type Output = LPolynomial;
    fn neg(self) -> LPolynomial {
        LPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Renders as `c0 + c1*L + c2*L^2 + ...` with exact decimal coefficients,
/// omitting zero terms and unit coefficients on powers of `L`.
impl fmt::Display for LPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            match d {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if d == 1 {
                        write!(f, "L")?;
                    } else {
                        write!(f, "L^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The even Betti numbers of one `n`-marked space: `ranks[l]` is the rank in
/// cohomological degree `2l`, for `l = 0..=n-3`.
///
/// Construction validates positivity, the boundary ones, and the Poincaré
/// symmetry `ranks[l] = ranks[n-3-l]`; a violation means a formula or
/// convention bug upstream, and the offending data is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    n: u32,
    ranks: Vec<BigInt>,
}

impl BettiTable {
    pub fn new(n: u32, ranks: Vec<BigInt>) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain {
                what: "betti tables need n >= 3".to_string(),
            });
        }
        let len = (n - 2) as usize;
        if ranks.len() != len {
            return Err(Error::InvariantViolation {
                n,
                what: alloc::format!("{} entries, expected {len}", ranks.len()),
            });
        }
        for (l, r) in ranks.iter().enumerate() {
            if !r.is_positive() {
                return Err(Error::InvariantViolation {
                    n,
                    what: alloc::format!("rank at l={l} is {r}, expected positive"),
                });
            }
        }
        if !ranks[0].is_one() || !ranks[len - 1].is_one() {
            return Err(Error::InvariantViolation {
                n,
                what: alloc::format!(
                    "boundary ranks are {} and {}, expected 1 and 1",
                    ranks[0],
                    ranks[len - 1]
                ),
            });
        }
        for l in 0..len / 2 {
            if ranks[l] != ranks[len - 1 - l] {
                return Err(Error::InvariantViolation {
                    n,
                    what: alloc::format!(
                        "symmetry fails: rank[{l}] = {} but rank[{}] = {}",
                        ranks[l],
                        len - 1 - l,
                        ranks[len - 1 - l]
                    ),
                });
            }
        }
        Ok(BettiTable { n, ranks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ranks(&self) -> &[BigInt] {
        &self.ranks
    }

    pub fn rank(&self, l: u32) -> BigInt {
        self.ranks
            .get(l as usize)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// The class polynomial whose coefficients these ranks are.
    pub fn class(&self) -> LPolynomial {
        LPolynomial::from_coeffs(self.ranks.clone())
    }

    /// Comma-separated decimal ranks, ascending degree.
    pub fn ranks_csv(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&r.to_string());
        }
        out
    }
}
