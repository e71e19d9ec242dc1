//! Interval status sieve.
//!
//! The greedy maximal k-GP-free subset of (0, 1] is constant on every
//! elementary interval I_N = (1/(N+1), 1/N], so membership reduces to one
//! bit per integer N: "good" (the interval is kept) or "bad" (excluded).
//! Writing status[N] for that bit, the construction satisfies
//!
//!   status[N] = good  iff  for every integer r >= 2 with r^(k-1) <= N
//!                          some j in 1..=k-1 has status[floor(N / r^j)] = bad.
//!
//! Equivalently, N is bad exactly when some ratio r places all of
//! 1/N * r^j (j = 1..k-1) inside already-kept intervals; larger ratios are
//! excluded because 1/N * r^(k-1) would leave (0, 1]. See docs/derivation.md
//! for the derivation.
//!
//! Provided here:
//! * [`badness_witness`] / [`elementary_status`]: the recurrence itself,
//!   evaluated against any status lookup for smaller indices.
//! * [`run_sieve`]: dense one-bit-per-N table up to a limit.
//! * [`sparse_endpoints`]: run-length evaluation of the same recurrence that
//!   advances only at candidate indices, usable far beyond dense limits.
//! * [`extract_endpoints`]: flip positions of a dense table.
//! * [`midpoint_status_oracle`]: independent re-derivation of one status from
//!   the set definition with exact rationals, for cross-validation.
//! * [`delta_gap_violation`] / [`lineage_violation`]: structural checks on
//!   endpoint sequences.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::exact::{integer, integer_root, one, ratio, Rational};
use crate::{Error, Result};

/// Parameters for a dense sieve run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveParams {
    pub k: u32,
    pub limit: u64,
}

/// Environment variable consulted by [`run_sieve`]: maximum bytes the status
/// table may allocate.
pub const MEMORY_BUDGET_ENV: &str = "GPFREE_MEMORY_BUDGET";

/// Table allocation cap applied when [`MEMORY_BUDGET_ENV`] is unset: 4 GiB,
/// enough for limits up to ~3.4 * 10^10.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Good/bad status for every elementary interval index 1..=limit, one bit
/// per index. Built by [`run_sieve`]; read-only afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatusTable {
    k: u32,
    limit: u64,
    words: Vec<u64>,
}

impl StatusTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Status of interval index n. Panics if n is 0 or exceeds the limit.
    #[inline]
    pub fn status(&self, n: u64) -> bool {
        assert!(n >= 1 && n <= self.limit, "status index {n} out of range");
        self.get(n)
    }

    #[inline]
    fn get(&self, n: u64) -> bool {
        (self.words[(n >> 6) as usize] >> (n & 63)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, n: u64) {
        self.words[(n >> 6) as usize] |= 1 << (n & 63);
    }

    /// Number of good indices in 1..=limit. Bit 0 and bits above the limit
    /// are never set, so a plain popcount is exact.
    pub fn count_good(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

/// Endpoint sequence A_1 < A_2 < ... of a status table: A_1 = 1 and every
/// index where the status differs from its predecessor. Odd-indexed
/// endpoints (1-based) start good runs, so status[N] = good exactly when
/// the last endpoint <= N has odd index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointSequence {
    k: u32,
    endpoints: Vec<u64>,
    complete_below: u64,
}

impl EndpointSequence {
    /// Validates strict increase from A_1 = 1 and k >= 3.
    pub fn new(k: u32, endpoints: Vec<u64>, complete_below: u64) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParams(format!("k must be >= 3, got {k}")));
        }
        if endpoints.first() != Some(&1) {
            return Err(Error::InvalidParams(
                "endpoint sequence must start at 1".into(),
            ));
        }
        if !endpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(
                "endpoints must be strictly increasing".into(),
            ));
        }
        if endpoints.last().copied().unwrap_or(0) > complete_below {
            return Err(Error::InvalidParams(
                "endpoints exceed complete_below".into(),
            ));
        }
        Ok(Self {
            k,
            endpoints,
            complete_below,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn endpoints(&self) -> &[u64] {
        &self.endpoints
    }

    /// Every flip at index <= this value has been found.
    pub fn complete_below(&self) -> u64 {
        self.complete_below
    }

    /// Number of good runs closed on both sides.
    pub fn complete_pairs(&self) -> usize {
        self.endpoints.len() / 2
    }

    /// i-th complete pair (A_{2i-1}, A_{2i}), 1-based.
    pub fn pair(&self, i: usize) -> (u64, u64) {
        assert!(i >= 1 && i <= self.complete_pairs(), "pair index {i}");
        (self.endpoints[2 * i - 2], self.endpoints[2 * i - 1])
    }

    /// Status of index n, for n <= complete_below.
    pub fn status(&self, n: u64) -> bool {
        assert!(n >= 1 && n <= self.complete_below, "status index {n}");
        self.endpoints.partition_point(|&a| a <= n) % 2 == 1
    }
}

/// Smallest ratio r >= 2 with r^(k-1) <= n whose quotient chain
/// floor(n/r^j), j = 1..k-1, is entirely good, or None when no ratio
/// certifies n as bad. `status_below(m)` must return the status of m; it is
/// only called with 1 <= m <= n/2.
pub fn badness_witness(k: u32, n: u64, status_below: impl Fn(u64) -> bool) -> Option<u64> {
    assert!(k >= 3, "badness_witness: k must be >= 3");
    assert!(n >= 1, "badness_witness: n must be >= 1");
    let r_max = integer_root(n, k - 1);
    for r in 2..=r_max {
        let mut m = n;
        let mut all_good = true;
        for _ in 1..k {
            m /= r;
            if !status_below(m) {
                all_good = false;
                break;
            }
        }
        if all_good {
            return Some(r);
        }
    }
    None
}

/// The recurrence: status of index n given statuses of all smaller indices.
pub fn elementary_status(k: u32, n: u64, status_below: impl Fn(u64) -> bool) -> bool {
    badness_witness(k, n, status_below).is_none()
}

fn memory_budget() -> u64 {
    match std::env::var(MEMORY_BUDGET_ENV) {
        Ok(v) => v.parse().unwrap_or(DEFAULT_MEMORY_BUDGET),
        Err(_) => DEFAULT_MEMORY_BUDGET,
    }
}

/// Dense bottom-up sieve: computes the status of every index 1..=limit.
pub fn run_sieve(params: SieveParams) -> Result<StatusTable> {
    let SieveParams { k, limit } = params;
    if k < 3 {
        return Err(Error::InvalidParams(format!("k must be >= 3, got {k}")));
    }
    if limit < 1 {
        return Err(Error::InvalidParams("limit must be >= 1".into()));
    }
    let words = (limit / 64 + 1) as usize;
    let needed_bytes = words as u64 * 8;
    let budget = memory_budget();
    if needed_bytes > budget {
        return Err(Error::Resource(format!(
            "status table for limit {limit} needs {needed_bytes} bytes, budget is {budget} \
             (override with {MEMORY_BUDGET_ENV})"
        )));
    }
    let mut table = StatusTable {
        k,
        limit,
        words: vec![0; words],
    };
    for n in 1..=limit {
        if elementary_status(k, n, |m| table.get(m)) {
            table.set(n);
        }
    }
    Ok(table)
}

/// Flip positions of a dense table: A_1 = 1 plus every n with
/// status[n] != status[n-1]. A run still open at the limit emits no closing
/// endpoint; complete_below records the limit.
pub fn extract_endpoints(table: &StatusTable) -> EndpointSequence {
    let mut endpoints = vec![1u64];
    let mut prev = table.get(1);
    for n in 2..=table.limit {
        let cur = table.get(n);
        if cur != prev {
            endpoints.push(n);
            prev = cur;
        }
    }
    EndpointSequence {
        k: table.k,
        endpoints,
        complete_below: table.limit,
    }
}

/// Endpoint sequence below `horizon` computed without a dense table.
///
/// Statuses are constant between consecutive candidate indices r^j * A
/// (A an already-found endpoint, r^(k-1) <= horizon, 1 <= j <= k-1): the
/// sources floor(N / r^j) of the recurrence cross an endpoint value exactly
/// at those N, and a new ratio r first becomes admissible at r^(k-1) * A_1.
/// So it suffices to evaluate the recurrence at candidates, looking statuses
/// up by rank parity in the endpoint list found so far. Memory and time
/// scale with the number of candidates, not with horizon, which makes
/// closed-form cross-checks feasible at horizons near 10^18 where a dense
/// table cannot exist.
pub fn sparse_endpoints(k: u32, horizon: u64) -> Result<EndpointSequence> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("k must be >= 3, got {k}")));
    }
    if horizon < 1 {
        return Err(Error::InvalidParams("horizon must be >= 1".into()));
    }
    let r_cap = integer_root(horizon, k - 1);
    let mut endpoints: Vec<u64> = vec![1];
    let mut heap: BinaryHeap<Reverse<u64>> = BinaryHeap::new();
    let spawn = |heap: &mut BinaryHeap<Reverse<u64>>, a: u64| {
        for r in 2..=r_cap {
            let mut p = a;
            for _ in 1..k {
                p = match p.checked_mul(r) {
                    Some(p) if p <= horizon => p,
                    _ => break,
                };
                heap.push(Reverse(p));
            }
        }
    };
    spawn(&mut heap, 1);
    while let Some(Reverse(c)) = heap.pop() {
        while heap.peek() == Some(&Reverse(c)) {
            heap.pop();
        }
        let good = elementary_status(k, c, |m| {
            endpoints.partition_point(|&a| a <= m) % 2 == 1
        });
        let run_is_good = endpoints.len() % 2 == 1;
        if good != run_is_good {
            endpoints.push(c);
            spawn(&mut heap, c);
        }
    }
    Ok(EndpointSequence {
        k,
        endpoints,
        complete_below: horizon,
    })
}

/// Independent status derivation for cross-validation: classifies the
/// midpoint-side rational x = 2/(2N+1) of interval N directly from the set
/// definition, using exact rational comparisons against the good intervals
/// described by `endpoints_below` (all flips at indices < N, in order).
/// Never consults the recurrence, floor division, or integer roots.
///
/// x is bad iff some integer ratio r >= 2 keeps x * r^(k-1) inside (0, 1]
/// and places every x * r^j (j = 1..k-1) inside a good interval. A point p
/// lies in a good interval exactly when the largest i with p <= 1/A_i is
/// odd: complete pairs give (1/A_{2i}, 1/A_{2i-1}], and an open good run
/// from A_m covers (1/N, 1/A_m], which suffices because every tested point
/// exceeds x * 2 > 1/N.
pub fn midpoint_status_oracle(k: u32, n: u64, endpoints_below: &[u64]) -> bool {
    assert!(k >= 3, "midpoint_status_oracle: k must be >= 3");
    assert!(n >= 1, "midpoint_status_oracle: n must be >= 1");
    let x = ratio(2, 2 * n + 1);
    let in_good = |p: &Rational| -> bool {
        if *p > one() {
            return false;
        }
        let i = endpoints_below.partition_point(|&a| p * integer(a) <= one());
        i % 2 == 1
    };
    let mut r: u64 = 2;
    loop {
        let rq = integer(r);
        let mut p = x.clone();
        let mut points = Vec::with_capacity(k as usize - 1);
        for _ in 1..k {
            p *= &rq;
            points.push(p.clone());
        }
        if *points.last().unwrap() > one() {
            return true; // this and every larger ratio escapes (0, 1]
        }
        if points.iter().all(&in_good) {
            return false;
        }
        r += 1;
    }
}

/// First index 2i with A_{2i+1}^(k-2) > A_{2i}^(k-1), if any. The gap
/// between a closed good run and the next one grows at least geometrically;
/// this checks that exactly.
pub fn delta_gap_violation(seq: &EndpointSequence) -> Option<usize> {
    let k = seq.k;
    let eps = &seq.endpoints;
    let mut i = 1; // endpoint index 2i is eps[2i-1]
    while 2 * i < eps.len() {
        let even = num::BigUint::from(eps[2 * i - 1]).pow(k - 1);
        let odd = num::BigUint::from(eps[2 * i]).pow(k - 2);
        if odd > even {
            return Some(2 * i);
        }
        i += 1;
    }
    None
}

/// First endpoint (1-based index) not divisible by any earlier endpoint of
/// opposite index parity with quotient r^j (r >= 2, 1 <= j <= k-1), if any.
/// Every endpoint after A_1 arises as such a product.
pub fn lineage_violation(seq: &EndpointSequence) -> Option<usize> {
    let k = seq.k;
    let eps = &seq.endpoints;
    let is_power = |q: u64| -> bool {
        if q < 2 {
            return false;
        }
        (1..k).any(|j| {
            let r = integer_root(q, j);
            r >= 2 && (1..j).fold(r as u128, |acc, _| acc * r as u128) == q as u128
        })
    };
    for i in 2..=eps.len() {
        let v = eps[i - 1];
        let ok = (1..i)
            .filter(|t| t % 2 != i % 2)
            .any(|t| v.is_multiple_of(eps[t - 1]) && is_power(v / eps[t - 1]));
        if !ok {
            return Some(i);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(k: u32, limit: u64) -> StatusTable {
        run_sieve(SieveParams { k, limit }).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(run_sieve(SieveParams { k: 2, limit: 10 }).is_err());
        assert!(run_sieve(SieveParams { k: 3, limit: 0 }).is_err());
        assert!(sparse_endpoints(2, 10).is_err());
    }

    #[test]
    fn budget_refuses_oversized_table() {
        // 10^15 indices need ~125 TB; must fail before allocating.
        let err = run_sieve(SieveParams {
            k: 3,
            limit: 1_000_000_000_000_000,
        })
        .unwrap_err();
        assert!(matches!(err, Error::Resource(_)), "got {err:?}");
    }

    #[test]
    fn k3_statuses_bootstrap() {
        let t = table(3, 50);
        // Good below 2^(k-1) = 4, first bad run is 4..=7.
        for n in 1..=3 {
            assert!(t.status(n), "n={n}");
        }
        for n in 4..=7 {
            assert!(!t.status(n), "n={n}");
        }
        assert!(t.status(8));
        assert!(!t.status(9));
        assert!(t.status(12));
        assert!(!t.status(24));
        assert!(t.status(27));
    }

    #[test]
    fn prefix_below_first_power_is_good() {
        for k in 3..=9 {
            let t = table(k, 2u64.pow(k - 1) + 4);
            for n in 1..2u64.pow(k - 1) {
                assert!(t.status(n), "k={k} n={n}");
            }
            assert!(!t.status(2u64.pow(k - 1)), "k={k}");
        }
    }

    #[test]
    fn witness_examples() {
        let t = table(3, 100);
        assert_eq!(badness_witness(3, 10, |m| t.status(m)), Some(3));
        assert_eq!(badness_witness(3, 8, |m| t.status(m)), None);
        let t4 = table(4, 100);
        assert_eq!(badness_witness(4, 48, |m| t4.status(m)), Some(3));
    }

    #[test]
    fn witnesses_are_sound_and_minimal() {
        let t = table(3, 2000);
        for n in 1..=2000 {
            match badness_witness(3, n, |m| t.status(m)) {
                Some(r) => {
                    assert!(!t.status(n));
                    assert!(r >= 2 && r * r <= n);
                    assert!(t.status(n / r) && t.status(n / (r * r)), "n={n} r={r}");
                    for s in 2..r {
                        assert!(
                            !(t.status(n / s) && t.status(n / (s * s))),
                            "smaller witness {s} exists for n={n}"
                        );
                    }
                }
                None => assert!(t.status(n)),
            }
        }
    }

    #[test]
    fn endpoints_match_reference_prefix() {
        for k in 3..=9 {
            let limit = 25_000;
            let seq = extract_endpoints(&table(k, limit));
            let expect: Vec<u64> = crate::golden::reference_endpoints(k)
                .unwrap()
                .into_iter()
                .filter(|&a| a <= limit)
                .collect();
            assert_eq!(seq.endpoints(), expect, "k={k}");
            assert_eq!(seq.complete_below(), limit);
        }
    }

    #[test]
    fn endpoint_parity_matches_table() {
        let t = table(4, 3000);
        let seq = extract_endpoints(&t);
        for n in 1..=3000 {
            assert_eq!(seq.status(n), t.status(n), "n={n}");
        }
    }

    #[test]
    fn tiny_limit_has_single_endpoint() {
        let seq = extract_endpoints(&table(3, 3));
        assert_eq!(seq.endpoints(), &[1]);
        assert_eq!(seq.complete_below(), 3);
        assert_eq!(seq.complete_pairs(), 0);
    }

    #[test]
    fn sieve_is_deterministic() {
        let a = table(3, 5000);
        let b = table(3, 5000);
        assert_eq!(a, b);
    }

    #[test]
    fn sparse_matches_dense() {
        for k in 3..=9 {
            let limit = 11_000;
            let dense = extract_endpoints(&table(k, limit));
            let sparse = sparse_endpoints(k, limit).unwrap();
            assert_eq!(dense, sparse, "k={k}");
        }
    }

    #[test]
    fn sparse_reaches_reference_tails() {
        // Horizons above any dense test limit, checked against the full
        // reference columns.
        for k in [5u32, 7, 9] {
            let reference = crate::golden::reference_endpoints(k).unwrap();
            let horizon = *reference.last().unwrap() + 1;
            let sparse = sparse_endpoints(k, horizon).unwrap();
            assert_eq!(sparse.endpoints(), reference, "k={k}");
        }
    }

    #[test]
    fn midpoint_oracle_examples() {
        assert!(midpoint_status_oracle(3, 1, &[]));
        assert!(!midpoint_status_oracle(3, 4, &[1]));
        assert!(midpoint_status_oracle(3, 8, &[1, 4]));
    }

    #[test]
    fn midpoint_oracle_matches_recurrence() {
        for k in 3..=6 {
            let limit = 1500;
            let t = table(k, limit);
            let mut eps: Vec<u64> = Vec::new();
            let mut prev = false;
            for n in 1..=limit {
                let got = midpoint_status_oracle(k, n, &eps);
                assert_eq!(got, t.status(n), "k={k} n={n}");
                if n == 1 || got != prev {
                    eps.push(n);
                }
                prev = got;
            }
        }
    }

    #[test]
    fn structural_checks_pass_on_reference_data() {
        for k in 3..=9 {
            let eps = crate::golden::reference_endpoints(k).unwrap();
            let seq = EndpointSequence::new(k, eps, 1_000_000).unwrap();
            assert_eq!(delta_gap_violation(&seq), None, "k={k}");
            assert_eq!(lineage_violation(&seq), None, "k={k}");
        }
    }

    #[test]
    fn structural_checks_catch_corruption() {
        let seq = EndpointSequence::new(3, vec![1, 4, 8, 9, 11, 24], 30).unwrap();
        // 11 is neither a power product of an even-indexed endpoint nor
        // geometric-gap compatible in this position.
        assert_eq!(lineage_violation(&seq), Some(5));
        let seq2 = EndpointSequence::new(3, vec![1, 4, 2209, 9000], 10_000).unwrap();
        assert_eq!(delta_gap_violation(&seq2), Some(2));
    }

    #[test]
    fn endpoint_sequence_validation() {
        assert!(EndpointSequence::new(3, vec![1, 4, 8], 10).is_ok());
        assert!(EndpointSequence::new(3, vec![4, 8], 10).is_err());
        assert!(EndpointSequence::new(3, vec![1, 8, 4], 10).is_err());
        assert!(EndpointSequence::new(3, vec![1, 4, 8], 7).is_err());
        assert!(EndpointSequence::new(2, vec![1], 10).is_err());
    }

    #[test]
    fn count_good_matches_scan() {
        let t = table(3, 1000);
        let by_scan = (1..=1000).filter(|&n| t.status(n)).count() as u64;
        assert_eq!(t.count_good(), by_scan);
    }
}
