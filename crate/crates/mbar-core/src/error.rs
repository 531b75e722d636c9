//! Error type shared by every module of the crate.
//!
//! Most of these signal a *mathematical* inconsistency (a formula producing a
//! non-integer rank, a truncated series with a nonzero verification band, a
//! table breaking Poincaré symmetry) rather than an IO-style failure, so they
//! carry the offending exact values for diagnosis.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::formulas::StirlingConvention;

pub type Result<T> = core::result::Result<T, Error>;

/// Outcome of trying one summation-start candidate while resolving the
/// Stirling double-series convention; kept verbatim so a failed resolution
/// can dump all four candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConventionOutcome {
    pub k_start: u32,
    pub j_start: u32,
    /// What the candidate produced: the class it computed, or the error it hit.
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument outside the supported domain (e.g. `n` above the strata
    /// enumeration limit, or an open-stratum class for fewer than 3 markings).
    Domain { what: String },
    /// A scan parameter outside the admissible range of the statement being
    /// probed (e.g. `l` too large relative to `n / (10 ln n)`).
    Range { what: String },
    /// A computed class failed the Betti-table invariants (degree, positivity,
    /// boundary ones, or symmetry). Signals a formula or convention bug
    /// upstream, never bad user input.
    InvariantViolation { n: u32, what: String },
    /// The truncated double series, multiplied by `(1-L)^{n-1}`, left a
    /// nonzero coefficient inside the band that must vanish.
    TruncationCheckFailed {
        n: u32,
        degree: usize,
        coefficient: BigInt,
    },
    /// The rank formula summed to a non-integer rational.
    NonIntegralResult { n: u32, l: u32, value: BigRational },
    /// The rank formula summed to a negative value.
    NegativeResult { n: u32, l: u32, value: BigRational },
    /// No summation-start candidate reproduced the strata oracle.
    NoConventionMatches { candidates: Vec<ConventionOutcome> },
    /// More than one candidate matched; the caller should raise `n_check`.
    AmbiguousConvention { matching: Vec<StirlingConvention> },
    /// A structural assertion that should be unreachable fired (e.g. a stable
    /// tree vertex of valence < 3).
    Internal { what: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::Range { what } => write!(f, "range error: {what}"),
            Error::InvariantViolation { n, what } => {
                write!(f, "betti table invariant violated at n={n}: {what}")
            }
            Error::TruncationCheckFailed {
                n,
                degree,
                coefficient,
            } => write!(
                f,
                "truncation check failed at n={n}: coefficient of L^{degree} is {coefficient}, expected 0"
            ),
            Error::NonIntegralResult { n, l, value } => {
                write!(f, "rank formula gave non-integer {value} at n={n}, l={l}")
            }
            Error::NegativeResult { n, l, value } => {
                write!(f, "rank formula gave negative value {value} at n={n}, l={l}")
            }
            Error::NoConventionMatches { candidates } => {
                write!(f, "no summation convention matches the strata oracle;")?;
                for c in candidates {
                    write!(
                        f,
                        " (k_start={}, j_start={}): {};",
                        c.k_start, c.j_start, c.outcome
                    )?;
                }
                Ok(())
            }
            Error::AmbiguousConvention { matching } => {
                write!(f, "{} summation conventions match; raise n_check:", matching.len())?;
                for c in matching {
                    write!(f, " (k_start={}, j_start={})", c.k_start(), c.j_start())?;
                }
                Ok(())
            }
            Error::Internal { what } => write!(f, "internal error: {what}"),
        }
    }
}

impl core::error::Error for Error {}
