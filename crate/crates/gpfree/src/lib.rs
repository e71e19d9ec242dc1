//! Greedy maximal geometric-progression-free subsets of (0, 1].
//!
//! A set is k-GP-free when it contains no geometric progression
//! a, ar, ..., ar^(k-1) with integer ratio r >= 2. The greedy maximal
//! k-GP-free subset of (0, 1] is a union of intervals whose endpoints are
//! reciprocals of integers 1 = A_1 < A_2 < A_3 < ...; this crate computes
//! those endpoint sequences, the exact density bounds they imply, and the
//! dilated integer sets they induce. For 3 <= k <= 9 the sequences are
//! OEIS A235054 through A235060.
//!
//! * [`exact`]: arbitrary-precision rationals and exact integer roots.
//! * [`sieve`]: interval status sieve and endpoint extraction.
//! * [`closed_forms`]: closed forms for the first four endpoints.
//! * [`density`]: exact lower-bound sums and decimal rendering.
//! * [`integer_sets`]: GP-free checks, dilated sets, brute-force maxima.
//! * [`export`]: JSON / CSV / b-file serialization of endpoint sequences.
//! * [`golden`]: embedded reference values used for verification.

pub mod closed_forms;
pub mod density;
pub mod exact;
pub mod export;
pub mod golden;
pub mod integer_sets;
pub mod sieve;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
