//! Exact density lower bounds.
//!
//! Each complete pair (A_{2i-1}, A_{2i}) of an endpoint sequence contributes
//! measure 1/A_{2i-1} - 1/A_{2i}, so partial sums of those terms are exact
//! rational lower bounds for the density of the greedy maximal k-GP-free
//! set. Sums are never floated; decimal output goes through
//! [`render_decimal`], which does exact long division with an explicit
//! rounding mode.

use std::fmt;
use std::str::FromStr;

use num::BigInt;

use crate::closed_forms;
use crate::exact::{one, unit_fraction, zero, Rational};
use crate::sieve::{extract_endpoints, run_sieve, EndpointSequence, SieveParams};
use crate::{Error, Result};

/// Sum over the first `pairs` complete pairs of 1/A_{2i-1} - 1/A_{2i}.
/// Errors when the sequence has fewer complete pairs than requested.
pub fn partial_sum(seq: &EndpointSequence, pairs: usize) -> Result<Rational> {
    if pairs > seq.complete_pairs() {
        return Err(Error::InvalidParams(format!(
            "requested {pairs} pairs, sequence completes only {}",
            seq.complete_pairs()
        )));
    }
    let mut sum = zero();
    for i in 1..=pairs {
        let (odd, even) = seq.pair(i);
        sum += unit_fraction(odd) - unit_fraction(even);
    }
    Ok(sum)
}

/// The two-pair closed form 1 - 1/2^k - 1/A_4(k), equal to
/// `partial_sum(seq, 2)` for every k. The superficially similar
/// 1 - 1/2^k - 1/3^k is NOT a valid lower bound: 1/3^k < 1/A_4(k)
/// always, and for k = 3 that expression even exceeds the full series.
pub fn closed_lower_bound(k: u32) -> Result<Rational> {
    let a3 = closed_forms::a3(k)?;
    let a4 = closed_forms::a4(k)?.value;
    Ok(one() - unit_fraction(a3) - unit_fraction(a4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    Truncate,
    RoundHalfEven,
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundingMode::Truncate => "truncate",
            RoundingMode::RoundHalfEven => "round-half-even",
        })
    }
}

impl FromStr for RoundingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncate" => Ok(RoundingMode::Truncate),
            "round-half-even" => Ok(RoundingMode::RoundHalfEven),
            other => Err(Error::Parse(format!(
                "unknown rounding mode {other:?} (expected truncate or round-half-even)"
            ))),
        }
    }
}

/// Renders a non-negative rational to exactly `digits` fractional digits.
/// Exact long division: the quotient of value * 10^digits by the
/// denominator decides every digit; round-half-even resolves a remainder of
/// exactly half a unit toward the even last digit.
///
/// Panics if `value` is negative or `digits` is 0.
pub fn render_decimal(value: &Rational, digits: u32, mode: RoundingMode) -> String {
    assert!(*value >= zero(), "render_decimal: negative value");
    assert!(digits > 0, "render_decimal: digits must be positive");
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value.numer() * &scale;
    let den = value.denom();
    let mut q = &scaled / den;
    let r = &scaled % den;
    if mode == RoundingMode::RoundHalfEven {
        let twice = 2 * r;
        if twice > *den || (twice == *den && &q % 2 != BigInt::from(0)) {
            q += 1;
        }
    }
    let ip = &q / &scale;
    let fp = &q % &scale;
    format!("{ip}.{:0>width$}", fp.to_string(), width = digits as usize)
}

/// One row of [`bound_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityBound {
    pub k: u32,
    /// Complete pairs below the sieve limit; open runs contribute nothing.
    pub pairs_used: usize,
    pub value: Rational,
    pub decimal: String,
}

/// Density lower bounds for kmin..=kmax, each from a dense sieve to `limit`,
/// using every pair complete below the limit.
pub fn bound_table(
    kmin: u32,
    kmax: u32,
    limit: u64,
    digits: u32,
    mode: RoundingMode,
) -> Result<Vec<DensityBound>> {
    if kmin < 3 || kmin > kmax {
        return Err(Error::InvalidParams(format!(
            "need 3 <= kmin <= kmax, got {kmin}..={kmax}"
        )));
    }
    (kmin..=kmax)
        .map(|k| {
            let seq = extract_endpoints(&run_sieve(SieveParams { k, limit })?);
            let pairs_used = seq.complete_pairs();
            let value = partial_sum(&seq, pairs_used)?;
            let decimal = render_decimal(&value, digits, mode);
            Ok(DensityBound {
                k,
                pairs_used,
                value,
                decimal,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn seq(k: u32, limit: u64) -> EndpointSequence {
        extract_endpoints(&run_sieve(SieveParams { k, limit }).unwrap())
    }

    #[test]
    fn two_pair_sums_match_closed_form() {
        // 1 - 1/2^k - 1/A_4 reduced by hand for the first few k.
        let expect = [
            (3, 55, 72),
            (4, 11, 12),
            (5, 23, 24),
            (6, 15245, 15552),
            (7, 571, 576),
            (8, 1147, 1152),
            (9, 3352159, 3359232),
        ];
        for (k, num, den) in expect {
            let s = seq(k, 10_000);
            assert_eq!(partial_sum(&s, 2).unwrap(), ratio(num, den), "k={k}");
            assert_eq!(closed_lower_bound(k).unwrap(), ratio(num, den), "k={k}");
        }
    }

    #[test]
    fn partial_sum_rejects_incomplete_pairs() {
        let s = seq(3, 10); // endpoints 1,4,8,9: two complete pairs
        assert_eq!(s.complete_pairs(), 2);
        assert_eq!(partial_sum(&s, 2).unwrap(), ratio(55, 72));
        assert!(partial_sum(&s, 3).is_err());
    }

    #[test]
    fn partial_sums_increase_in_h() {
        let s = seq(3, 200_000);
        let mut prev = zero();
        for h in 1..=s.complete_pairs() {
            let cur = partial_sum(&s, h).unwrap();
            assert!(cur > prev, "h={h}");
            assert!(cur < one());
            prev = cur;
        }
    }

    #[test]
    fn bound_sandwich() {
        for row in bound_table(3, 9, 50_000, 6, RoundingMode::Truncate).unwrap() {
            let closed = closed_lower_bound(row.k).unwrap();
            assert!(closed < row.value, "k={}", row.k);
            assert!(row.value < one(), "k={}", row.k);
        }
    }

    #[test]
    fn misstated_closed_form_is_not_a_bound() {
        // 1 - 1/2^k - 1/3^k exceeds even the full k=3 series, so it cannot
        // lower-bound the density; the 1/A_4 form stays strictly below.
        let wrong = one() - ratio(1, 8) - ratio(1, 27);
        let full = bound_table(3, 3, 1_000_000, 6, RoundingMode::Truncate)
            .unwrap()
            .remove(0);
        assert!(wrong > full.value);
        assert!(closed_lower_bound(3).unwrap() < full.value);
    }

    #[test]
    fn render_truncate() {
        assert_eq!(render_decimal(&ratio(55, 72), 6, RoundingMode::Truncate), "0.763888");
        assert_eq!(render_decimal(&ratio(1, 3), 3, RoundingMode::Truncate), "0.333");
        assert_eq!(render_decimal(&ratio(1, 1), 2, RoundingMode::Truncate), "1.00");
        assert_eq!(render_decimal(&zero(), 4, RoundingMode::Truncate), "0.0000");
    }

    #[test]
    fn render_half_even() {
        assert_eq!(render_decimal(&ratio(55, 72), 6, RoundingMode::RoundHalfEven), "0.763889");
        assert_eq!(render_decimal(&ratio(1, 2), 6, RoundingMode::RoundHalfEven), "0.500000");
        assert_eq!(render_decimal(&ratio(2, 3), 3, RoundingMode::RoundHalfEven), "0.667");
        // Ties land on the even digit in both directions.
        assert_eq!(render_decimal(&ratio(1, 8), 2, RoundingMode::RoundHalfEven), "0.12");
        assert_eq!(render_decimal(&ratio(3, 8), 2, RoundingMode::RoundHalfEven), "0.38");
        // Carry across the decimal point.
        assert_eq!(render_decimal(&ratio(999999, 1000000), 3, RoundingMode::RoundHalfEven), "1.000");
    }

    #[test]
    fn bound_table_small_limits() {
        let rows = bound_table(9, 9, 1_000, 6, RoundingMode::Truncate).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].pairs_used, 1);
        assert_eq!(rows[0].value, ratio(255, 256));

        let rows = bound_table(3, 3, 10, 6, RoundingMode::Truncate).unwrap();
        assert_eq!(rows[0].pairs_used, 2);
        assert_eq!(rows[0].value, ratio(55, 72));
        assert_eq!(rows[0].decimal, "0.763888");
    }

    #[test]
    fn bound_table_rejects_bad_range() {
        assert!(bound_table(2, 3, 10, 6, RoundingMode::Truncate).is_err());
        assert!(bound_table(5, 4, 10, 6, RoundingMode::Truncate).is_err());
    }

    #[test]
    fn rounding_mode_round_trip() {
        for mode in [RoundingMode::Truncate, RoundingMode::RoundHalfEven] {
            assert_eq!(mode.to_string().parse::<RoundingMode>().unwrap(), mode);
        }
        assert!("nearest".parse::<RoundingMode>().is_err());
    }
}
