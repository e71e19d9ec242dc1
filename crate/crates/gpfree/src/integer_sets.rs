//! Integer-side constructions and oracles.
//!
//! The unit-interval construction transfers to {1, ..., n} by dilation:
//! multiplying a GP-free set by any positive factor preserves GP-freeness,
//! so (n * G_h) intersected with the integers is a concrete GP-free subset
//! whose size tracks n times the measure of G_h to within h. This module
//! provides that dilated set, a GP-freeness checker with witnesses, the
//! exact g_2 closed form, and an exact branch-and-bound maximizer for
//! small n.

use num::Signed;

use crate::density::partial_sum;
use crate::exact::{integer, Rational};
use crate::sieve::EndpointSequence;
use crate::{Error, Result};

/// Finite set of positive integers, sorted strictly increasing, tracked
/// together with the universe bound [1, n_bound] it lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSet {
    elements: Vec<u64>,
    n_bound: u64,
}

impl IntegerSet {
    /// Sorts and deduplicates; rejects 0. The universe bound defaults to the
    /// maximum element (0 for the empty set).
    pub fn new(elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidParams("0 is not a valid element".into()));
        }
        let n_bound = elements.last().copied().unwrap_or(0);
        Ok(Self { elements, n_bound })
    }

    /// Like [`IntegerSet::new`] with an explicit universe bound.
    pub fn with_bound(elements: impl IntoIterator<Item = u64>, n_bound: u64) -> Result<Self> {
        let mut set = Self::new(elements)?;
        if set.n_bound > n_bound {
            return Err(Error::InvalidParams(format!(
                "element {} exceeds universe bound {n_bound}",
                set.n_bound
            )));
        }
        set.n_bound = n_bound;
        Ok(set)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn n_bound(&self) -> u64 {
        self.n_bound
    }

    pub fn contains(&self, v: u64) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }
}

/// A geometric progression a, ar, ..., ar^(length-1) found inside a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GpWitness {
    pub first_term: u64,
    pub ratio: u64,
    pub length: u32,
}

impl GpWitness {
    pub fn terms(&self) -> Vec<u64> {
        (0..self.length)
            .scan(self.first_term, |acc, j| {
                let t = *acc;
                if j + 1 < self.length {
                    *acc *= self.ratio;
                }
                Some(t)
            })
            .collect()
    }
}

/// Finds a length-k integer-ratio geometric progression inside the set, or
/// None when the set is k-GP-free. Enumerates a ascending, then r ascending
/// with a * r^(k-1) <= max(set), so the returned witness has the smallest
/// first term and, for it, the smallest ratio. Rejects k < 2.
pub fn check_gp_free(set: &IntegerSet, k: u32) -> Result<Option<GpWitness>> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("k must be >= 2, got {k}")));
    }
    let Some(max) = set.max() else {
        return Ok(None);
    };
    for &a in set.elements() {
        'ratio: for r in 2.. {
            let mut term = a;
            for _ in 1..k {
                term = match term.checked_mul(r) {
                    Some(t) if t <= max => t,
                    _ => break 'ratio, // larger r only grows the last term
                };
                if !set.contains(term) {
                    continue 'ratio;
                }
            }
            return Ok(Some(GpWitness {
                first_term: a,
                ratio: r,
                length: k,
            }));
        }
    }
    Ok(None)
}

/// The dilated set (n * G_h) ∩ ℕ: all m with A_{2i-1} * m <= n < A_{2i} * m
/// for some i <= h, i.e. the union of (n/A_{2i}, n/A_{2i-1}] over the first
/// h complete pairs. Exact integer arithmetic throughout; in particular the
/// boundary case A | n stays exact. Rejects h = 0 or h exceeding the
/// complete pairs of the sequence.
pub fn dilated_set(seq: &EndpointSequence, n: u64, h: usize) -> Result<IntegerSet> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    if h < 1 {
        return Err(Error::InvalidParams("h must be >= 1".into()));
    }
    if h > seq.complete_pairs() {
        return Err(Error::InvalidParams(format!(
            "h = {h} exceeds the {} complete pairs below {}",
            seq.complete_pairs(),
            seq.complete_below()
        )));
    }
    let mut elements = Vec::new();
    for i in (1..=h).rev() {
        let (odd, even) = seq.pair(i);
        // m > n/even  iff  m >= n/even + 1 (floor), m <= n/odd (floor):
        // both floors realize the cross-multiplied comparisons exactly.
        elements.extend(n / even + 1..=n / odd);
    }
    IntegerSet::with_bound(elements, n)
}

/// g_2(n) = floor((n+1)/2): the maximum size of a primitive (divisor-free)
/// subset of {1, ..., n}.
pub fn g2_formula(n: u64) -> u64 {
    n / 2 + (n & 1)
}

/// The canonical maximum primitive subset {floor(n/2)+1, ..., n}: no element
/// divides another because doubling the smallest already exceeds n.
pub fn primitive_witness(n: u64) -> Result<IntegerSet> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    IntegerSet::with_bound(n / 2 + 1..=n, n)
}

/// Search caps for [`brute_force_gk`]; exceeding a cap is a resource error,
/// not an attempt. Raise them explicitly for bigger runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceConfig {
    pub cap_k2: u64,
    pub cap_k3: u64,
    pub cap_k4_plus: u64,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        // Constraints thin out as k grows, so higher k affords larger n.
        Self {
            cap_k2: 48,
            cap_k3: 80,
            cap_k4_plus: 200,
        }
    }
}

impl BruteForceConfig {
    pub fn cap(&self, k: u32) -> u64 {
        match k {
            2 => self.cap_k2,
            3 => self.cap_k3,
            _ => self.cap_k4_plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    pub cardinality: usize,
    pub witness: IntegerSet,
}

/// Exact maximum k-GP-free subset of {1, ..., n} by branch and bound over
/// the hypergraph of forbidden k-sets {a * r^j}. Deterministic: returns the
/// lexicographically smallest witness of maximum cardinality.
///
/// Elements outside every forbidden set are always included. For the rest,
/// an optimize pass finds the maximum cardinality, then a per-element pass
/// commits each element in ascending order to "in" exactly when some
/// optimal solution extends the commitments so far, which pins the
/// lexicographically smallest optimum.
pub fn brute_force_gk(n: u64, k: u32, config: &BruteForceConfig) -> Result<BruteForceResult> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("k must be >= 2, got {k}")));
    }
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let cap = config.cap(k);
    if n > cap {
        return Err(Error::Resource(format!(
            "n = {n} exceeds the k = {k} brute-force cap {cap}; raise BruteForceConfig to override"
        )));
    }

    // Forbidden sets, enumerated r-major then a-major: complete and
    // duplicate-free because (a, r) determines the progression.
    let mut forbidden: Vec<Vec<u64>> = Vec::new();
    let mut r = 2u64;
    while r.checked_pow(k - 1).is_some_and(|p| p <= n) {
        let step = r.pow(k - 1);
        let mut a = 1u64;
        while a * step <= n {
            forbidden.push((0..k).map(|j| a * r.pow(j)).collect());
            a += 1;
        }
        r += 1;
    }

    let mut universe: Vec<u64> = forbidden.iter().flatten().copied().collect();
    universe.sort_unstable();
    universe.dedup();
    let index_of = |v: u64| universe.binary_search(&v).unwrap();
    let cons: Vec<Vec<usize>> = forbidden
        .iter()
        .map(|f| f.iter().map(|&v| index_of(v)).collect())
        .collect();
    let mut elem_cons = vec![Vec::new(); universe.len()];
    for (ci, c) in cons.iter().enumerate() {
        for &e in c {
            elem_cons[e].push(ci);
        }
    }

    let free = n as usize - universe.len();
    let mut search = Search::new(&cons, &elem_cons);
    search.dfs();
    let best = search.best;

    // Lexicographic pass: keep element e iff target `best` stays reachable.
    let mut committed: Vec<(usize, bool)> = Vec::new();
    for e in 0..universe.len() {
        committed.push((e, true));
        if !Search::feasible(&cons, &elem_cons, &committed, best) {
            committed.last_mut().unwrap().1 = false;
        }
    }
    let witness_elements = (1..=n).filter(|&v| {
        match universe.binary_search(&v) {
            Ok(e) => committed[e].1,
            Err(_) => true,
        }
    });
    let witness = IntegerSet::with_bound(witness_elements, n)?;
    let cardinality = free + best;
    assert_eq!(witness.len(), cardinality, "lexicographic pass lost optimality");
    Ok(BruteForceResult {
        cardinality,
        witness,
    })
}

/// Branch-and-bound state over the constrained elements only.
struct Search<'a> {
    cons: &'a [Vec<usize>],
    elem_cons: &'a [Vec<usize>],
    decided: Vec<i8>, // -1 undecided, 0 out, 1 in
    cons_in: Vec<usize>,
    cons_out: Vec<usize>,
    dead: usize, // constraints fully included
    included: usize,
    undecided: usize,
    best: usize,
    target: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(cons: &'a [Vec<usize>], elem_cons: &'a [Vec<usize>]) -> Self {
        Search {
            cons,
            elem_cons,
            decided: vec![-1; elem_cons.len()],
            cons_in: vec![0; cons.len()],
            cons_out: vec![0; cons.len()],
            dead: 0,
            included: 0,
            undecided: elem_cons.len(),
            best: 0,
            target: None,
        }
    }

    /// Can `target` included elements still be reached under `committed`?
    fn feasible(
        cons: &'a [Vec<usize>],
        elem_cons: &'a [Vec<usize>],
        committed: &[(usize, bool)],
        target: usize,
    ) -> bool {
        let mut s = Search::new(cons, elem_cons);
        s.target = Some(target);
        for &(e, inc) in committed {
            s.apply(e, inc);
        }
        s.dfs();
        s.best >= target
    }

    fn apply(&mut self, e: usize, include: bool) {
        self.decided[e] = include as i8;
        self.undecided -= 1;
        if include {
            self.included += 1;
        }
        for &c in &self.elem_cons[e] {
            if include {
                self.cons_in[c] += 1;
                if self.cons_in[c] == self.cons[c].len() {
                    self.dead += 1;
                }
            } else {
                self.cons_out[c] += 1;
            }
        }
    }

    fn undo(&mut self, e: usize, include: bool) {
        self.decided[e] = -1;
        self.undecided += 1;
        if include {
            self.included -= 1;
        }
        for &c in &self.elem_cons[e] {
            if include {
                if self.cons_in[c] == self.cons[c].len() {
                    self.dead -= 1;
                }
                self.cons_in[c] -= 1;
            } else {
                self.cons_out[c] -= 1;
            }
        }
    }

    fn unresolved(&self, c: usize) -> bool {
        self.cons_out[c] == 0
    }

    /// Greedy count of pairwise disjoint unresolved constraints: each needs
    /// one exclusion among its own undecided elements, so the count lower
    /// bounds the exclusions still to come.
    fn exclusion_lower_bound(&self, used: &mut [bool]) -> usize {
        used.fill(false);
        let mut count = 0;
        'cons: for (c, members) in self.cons.iter().enumerate() {
            if !self.unresolved(c) {
                continue;
            }
            for &e in members {
                if self.decided[e] == -1 && used[e] {
                    continue 'cons;
                }
            }
            count += 1;
            for &e in members {
                if self.decided[e] == -1 {
                    used[e] = true;
                }
            }
        }
        count
    }

    /// Undecided element in the most unresolved constraints; ties go to the
    /// smallest element. None means every constraint is resolved.
    fn branch_element(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (c, members) in self.cons.iter().enumerate() {
            if !self.unresolved(c) {
                continue;
            }
            for &e in members {
                if self.decided[e] != -1 {
                    continue;
                }
                let score = self.elem_cons[e]
                    .iter()
                    .filter(|&&cc| self.unresolved(cc))
                    .count();
                let better = match best {
                    None => true,
                    Some((bs, be)) => score > bs || (score == bs && e < be),
                };
                if better {
                    best = Some((score, e));
                }
            }
        }
        best.map(|(_, e)| e)
    }

    fn dfs(&mut self) {
        if self.dead > 0 {
            return;
        }
        if let Some(t) = self.target {
            if self.best >= t {
                return;
            }
        }
        let mut used = vec![false; self.decided.len()];
        let ub = self.included + self.undecided - self.exclusion_lower_bound(&mut used);
        let cutoff = match self.target {
            Some(t) => t - 1,
            None => self.best,
        };
        if ub <= cutoff {
            return;
        }
        match self.branch_element() {
            None => {
                // Every constraint already excludes something: everything
                // still undecided can come in.
                self.best = self.best.max(self.included + self.undecided);
            }
            Some(e) => {
                self.apply(e, false);
                self.dfs();
                self.undo(e, false);
                self.apply(e, true);
                self.dfs();
                self.undo(e, true);
            }
        }
    }
}

/// Outcome of the counting estimate for one (n, h): the dilated set size
/// differs from n times the h-pair measure by strictly less than h.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReport {
    pub n: u64,
    pub h: usize,
    pub count: u64,
    pub expected: Rational,
    /// count - expected, exact and signed.
    pub theta: Rational,
    pub within_bound: bool,
}

/// Verifies | |dilated| - n * partial_sum(h) | < h with exact rationals.
pub fn theta_check(seq: &EndpointSequence, n: u64, h: usize) -> Result<ThetaReport> {
    let count = dilated_set(seq, n, h)?.len() as u64;
    let expected = integer(n) * partial_sum(seq, h)?;
    let theta = integer(count) - &expected;
    let within_bound = theta.abs() < integer(h as u64);
    Ok(ThetaReport {
        n,
        h,
        count,
        expected,
        theta,
        within_bound,
    })
}
