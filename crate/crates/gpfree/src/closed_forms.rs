//! Closed forms for the first four endpoints of the sequence A_i.
//!
//! A_1 = 1 by construction, and for every k >= 3:
//!   A_2 = 2^(k-1)   (first index where ratio 2 fits below 1),
//!   A_3 = 2^k       (first index whose halving chain escapes the bad run),
//!   A_4 = 3^(k-1)                  when no power of 3 lies in (2^(k-1), 2^k),
//!   A_4 = 2^k * 3^(k-1-ell)        when 2^(k-1) < 3^ell < 2^k.
//!
//! The case split is decided by exact integer comparison, never by logs.
//! A frequent slip when restating these: writing 2^(k-1) for A_3 (that is
//! A_2's value; the halving-chain argument and the reference data both give
//! 2^k), and characterizing the A_4 split with floating-point log_3(2)
//! arithmetic, which this module deliberately avoids.

use crate::sieve::EndpointSequence;
use crate::{Error, Result};

fn check_k(k: u32, max: u32, what: &str) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("k must be >= 3, got {k}")));
    }
    if k > max {
        return Err(Error::InvalidParams(format!(
            "{what} overflows u64 for k > {max}, got {k}"
        )));
    }
    Ok(())
}

/// A_2 = 2^(k-1). Valid for 3 <= k <= 64.
pub fn a2(k: u32) -> Result<u64> {
    check_k(k, 64, "a2")?;
    Ok(1u64 << (k - 1))
}

/// A_3 = 2^k. Valid for 3 <= k <= 63.
pub fn a3(k: u32) -> Result<u64> {
    check_k(k, 63, "a3")?;
    Ok(1u64 << k)
}

/// The exponent ell with 2^(k-1) < 3^ell < 2^k, or None when no power of 3
/// lies strictly between. At most one can: consecutive powers of 3 are a
/// factor 3 apart, the interval only spans a factor 2.
pub fn power_of_three_exponent(k: u32) -> Result<Option<u32>> {
    check_k(k, 64, "power_of_three_exponent")?;
    let lo: u128 = 1 << (k - 1);
    let hi: u128 = 1 << k;
    let mut p: u128 = 1;
    let mut ell: u32 = 0;
    while p <= lo {
        p *= 3;
        ell += 1;
    }
    Ok((p < hi).then_some(ell))
}

/// A_4 with the case that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct A4Case {
    pub k: u32,
    /// Some(ell) when 2^(k-1) < 3^ell < 2^k forced the mixed form.
    pub ell: Option<u32>,
    pub value: u64,
}

/// A_4 per the case split above. Valid for 3 <= k <= 41 (3^41 > u64::MAX).
pub fn a4(k: u32) -> Result<A4Case> {
    check_k(k, 41, "a4")?;
    let ell = power_of_three_exponent(k)?;
    let value = match ell {
        None => 3u64.pow(k - 1),
        Some(ell) => {
            debug_assert!(ell >= 2 && ell <= k - 2);
            (1u64 << k)
                .checked_mul(3u64.pow(k - 1 - ell))
                .expect("a4 fits u64 for k <= 41")
        }
    };
    Ok(A4Case { k, ell, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossCheckEntry {
    /// 1-based endpoint index (2, 3, or 4).
    pub index: usize,
    pub expected: u64,
    pub actual: u64,
}

impl CrossCheckEntry {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub k: u32,
    pub entries: Vec<CrossCheckEntry>,
}

impl CrossCheckReport {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(CrossCheckEntry::matches)
    }
}

/// Compares endpoints 2..4 of a computed sequence against the closed forms.
/// Mismatches are reported, not swallowed. Errors when the sequence has
/// fewer than four endpoints.
pub fn cross_check(seq: &EndpointSequence) -> Result<CrossCheckReport> {
    let k = seq.k();
    let eps = seq.endpoints();
    if eps.len() < 4 {
        return Err(Error::InvalidParams(format!(
            "cross_check needs at least 4 endpoints, sequence has {}",
            eps.len()
        )));
    }
    let expected = [a2(k)?, a3(k)?, a4(k)?.value];
    let entries = expected
        .iter()
        .enumerate()
        .map(|(i, &expected)| CrossCheckEntry {
            index: i + 2,
            expected,
            actual: eps[i + 1],
        })
        .collect();
    Ok(CrossCheckReport { k, entries })
}
