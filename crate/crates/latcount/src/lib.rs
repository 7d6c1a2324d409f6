//! Exact counting of integer points in polytopes `{x : Ax = y, x >= 0}`
//! for nonnegative integer matrices A, in polynomial space.
//!
//! The count is recovered from a sweep over {0,...,N-1}^n (N = ‖y‖∞ + 1)
//! accumulated in the group ring of Z/NZ, followed by a divisor-pattern
//! reduction; a stable-set factorization shrinks the sweep for (k-partite)
//! hypergraph b-matching instances, and specialized N = 2 formulas handle
//! perfect matchings. Reference oracles (DP and brute force) validate every
//! path.

pub mod counter;
pub mod error;
pub mod groupring;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod partite;
pub mod report;

pub use error::{Error, Result};

/// Arbitrary-precision coefficient type used by all counting paths.
pub type Int = num_bigint::BigInt;
/// Group ring element over [`Int`].
pub type GroupRing = groupring::GroupRingElem<Int>;
/// Truncated polynomial over [`GroupRing`].
pub type Poly = groupring::TruncPoly<Int>;
