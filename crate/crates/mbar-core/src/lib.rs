//! Exact computation of the Grothendieck class of the moduli space of stable
//! n-pointed genus-zero curves, by three independent routes, together with the
//! structural checks that are interesting about these classes: unimodality,
//! binomial-normalized (ultra) log-concavity, real-rootedness, and the decay
//! of the error against the one-term asymptotic.
//!
//! The class is a polynomial in the Lefschetz class `L` with nonnegative
//! integer coefficients; the coefficient of `L^l` is the rank of the degree-2l
//! cohomology. Everything here is exact: big integers, big rationals, no
//! floating point anywhere.
//!
//! The three routes:
//!
//! * [`strata::class_via_strata`] sums the classes of the open strata over
//!   all boundary strata (stable trees, encoded as laminar families of marked
//!   subsets). Slow but elementary; serves as the ground-truth oracle.
//! * [`formulas::class_via_stirling`] evaluates a double series in Stirling
//!   numbers of both kinds times `(1-L)^{n-1}`, truncated with a
//!   verification band that must vanish.
//! * [`formulas::betti_via_cnki`] evaluates a per-coefficient rank formula
//!   built from the rational constants `C_{nki}`, one cohomology degree at a
//!   time.
//!
//! This crate is `no_std` (with `alloc`); IO, the CLI, and file formats live
//! in the companion `mbar-cli` crate.
//!
//! ```
//! use mbar_core::analysis::{is_real_rooted, ulc_check};
//! use mbar_core::formulas::{betti_table, Method};
//!
//! let table = betti_table(6, Method::Stirling).unwrap();
//! assert_eq!(table.ranks_csv(), "1,16,16,1");
//! assert_eq!(table, betti_table(6, Method::Strata).unwrap());
//! assert!(ulc_check(&table).all_hold);
//! assert!(is_real_rooted(&table.class()));
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod comb;
pub mod error;
pub mod formulas;
pub mod lpoly;
pub mod strata;

pub use error::Error;
pub use lpoly::{BettiTable, LPolynomial};
pub use num_bigint::{BigInt, Sign};
pub use num_rational::BigRational;

/// Largest `n` the strata oracle accepts by default. Stratum counts grow
/// super-exponentially (n=9 already has 660032 strata).
pub const DEFAULT_N_MAX_ORACLE: u32 = 9;

/// Default width of the vanishing band checked after the series truncation in
/// [`formulas::class_via_stirling`].
pub const DEFAULT_VERIFY_MARGIN: u32 = 5;
