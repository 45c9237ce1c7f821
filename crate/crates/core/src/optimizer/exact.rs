//! Branch-and-bound for optimal schemes.
//!
//! Candidates are all non-empty searches: connected permutations, and
//! monotone `L <= U` with entries in `0..=K` (larger bounds behave like `K`).
//! Each gets its edge count and the set of patterns it covers. A scheme is a
//! set of at most `S` candidates whose covers union to every pattern.
//!
//! Candidates are sorted canonically (first piece, `pi`, `L`, `U`) and sets
//! are grown in increasing order, so every set is visited once and in
//! lexicographic order. Only strictly better schemes replace the incumbent;
//! the first optimum reached is therefore the canonically smallest one.
//!
//! Pruning: a candidate must cover a new pattern; the candidates still
//! available must be able to cover what is missing; and the cost so far plus
//! the cheapest way to cover the hardest missing pattern must stay below the
//! incumbent. On a symmetric partition a scheme and its mirror image cost the
//! same, so only the canonically smaller of the two is explored.
//!
//! Before any of this, the bundled optimal scheme for the same `K` and `P`,
//! re-priced for the requested read length (or plain backtracking), gives a
//! starting incumbent; a greedy set cover over the candidates follows.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use super::{OptimizationResult, OptimizeError, ProblemSpec, ProofStatus, SolveOptions, SolveStats};
use crate::partition::Partition;
use crate::scheme::{builtins_for, covers, enumerate_mismatch_patterns, MismatchPattern, Search, SearchScheme};
use crate::trie::{count_edges_scheme, count_search_streaming, count_search_with};

/// An improving solution, as found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incumbent {
    pub objective: u128,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// All connected permutations of `1..=p`.
pub(crate) fn connected_permutations(p: usize) -> Vec<Vec<usize>> {
    fn grow(lo: usize, hi: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        if lo > 1 {
            cur.push(lo - 1);
            grow(lo - 1, hi, p, cur, out);
            cur.pop();
        }
        if hi < p {
            cur.push(hi + 1);
            grow(lo, hi + 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for first in 1..=p {
        grow(first, first, p, &mut vec![first], &mut out);
    }
    out
}

/// Non-decreasing sequences of length `len` over `0..=max`.
pub(crate) fn monotone_sequences(len: usize, max: u32) -> Vec<Vec<u32>> {
    fn grow(len: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let from = cur.last().copied().unwrap_or(0);
        for v in from..=max {
            cur.push(v);
            grow(len, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(len, max, &mut Vec::with_capacity(len), &mut out);
    out
}

struct Candidate {
    search: Search,
    cost: u64,
    /// Position in the canonical order of all candidates, and of the mirror image.
    rank: usize,
    mirror_rank: usize,
}

struct Pool {
    cands: Vec<Candidate>,
    words: usize,
    /// `covers[c * words..]`: pattern bitset of candidate `c`.
    covers: Vec<u64>,
    all: Vec<u64>,
}

impl Pool {
    fn cover(&self, c: usize) -> &[u64] {
        &self.covers[c * self.words..(c + 1) * self.words]
    }
}

fn build_pool(
    spec: &ProblemSpec,
    partition: &Partition,
    patterns: &[MismatchPattern],
    dominance: bool,
) -> (Pool, usize) {
    let k = spec.max_errors;
    let p = spec.pieces;
    let words = patterns.len().div_ceil(64).max(1);
    let sequences = monotone_sequences(p, k);
    let mut searches = Vec::new();
    for pi in connected_permutations(p) {
        for lower in &sequences {
            for upper in &sequences {
                if lower.iter().zip(upper).all(|(l, u)| l <= u) {
                    searches.push(Search::new(pi.clone(), lower.clone(), upper.clone()));
                }
            }
        }
    }
    searches.sort_by(Search::canonical_cmp);
    let total = searches.len();
    let rank_of: HashMap<&Search, usize> = searches.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mirror_ranks: Vec<usize> = searches.iter().map(|s| rank_of[&s.mirrored()]).collect();

    let mut cands = Vec::new();
    let mut bitsets = Vec::new();
    for (rank, search) in searches.iter().enumerate() {
        let mut bits = vec![0u64; words];
        for (q, pat) in patterns.iter().enumerate() {
            if covers(search, pat) {
                bits[q / 64] |= 1 << (q % 64);
            }
        }
        if bits.iter().all(|&w| w == 0) {
            continue;
        }
        let cost = price(search, partition, spec.sigma, k);
        cands.push(Candidate {
            search: search.clone(),
            cost,
            rank,
            mirror_rank: mirror_ranks[rank],
        });
        bitsets.extend_from_slice(&bits);
    }
    let mut all = vec![0u64; words];
    for q in 0..patterns.len() {
        all[q / 64] |= 1 << (q % 64);
    }
    let mut pool = Pool {
        cands,
        words,
        covers: bitsets,
        all,
    };
    if dominance {
        pool = remove_dominated(pool);
    }
    (pool, total)
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Drops `a` when some `b` covers at least as much and is cheaper, or equally
/// cheap and canonically earlier. No canonically smallest optimum uses `a`.
fn remove_dominated(pool: Pool) -> Pool {
    let n = pool.cands.len();
    // cheapest first, so a dominator is always earlier in this order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| (pool.cands[c].cost, pool.cands[c].rank));
    let mut kept_order: Vec<usize> = Vec::new();
    let mut alive = vec![false; n];
    for &a in &order {
        let dominated = kept_order.iter().any(|&b| subset(pool.cover(a), pool.cover(b)));
        if !dominated {
            kept_order.push(a);
            alive[a] = true;
        }
    }
    let mut cands = Vec::new();
    let mut covers = Vec::new();
    for (c, cand) in pool.cands.into_iter().enumerate() {
        if alive[c] {
            covers.extend_from_slice(&pool.covers[c * pool.words..(c + 1) * pool.words]);
            cands.push(cand);
        }
    }
    Pool {
        cands,
        covers,
        words: pool.words,
        all: pool.all,
    }
}

struct Solver<'a> {
    pool: &'a Pool,
    spec: ProblemSpec,
    mirror: bool,
    /// `suffix_union[i]`: union of covers of candidates `i..`.
    suffix_union: Vec<u64>,
    /// `min_cost[q * (n + 1) + i]`: cheapest candidate `>= i` covering `q`.
    min_cost: Vec<u64>,
    n_patterns: usize,
    best: Option<(u64, Vec<Search>)>,
    best_from_search: bool,
    chosen: Vec<usize>,
    nodes: u64,
    start: Instant,
    options: &'a SolveOptions,
    stopped: bool,
    history: Vec<Incumbent>,
}

impl Solver<'_> {
    fn incumbent(&self) -> u64 {
        self.best.as_ref().map_or(u64::MAX, |b| b.0)
    }

    /// `value` cannot improve on the incumbent. A heuristic incumbent may still
    /// be replaced by an equal-cost scheme found by the ordered search.
    fn hopeless(&self, value: u64) -> bool {
        let inc = self.incumbent();
        value > inc || (value == inc && self.best_from_search)
    }

    fn record(&mut self, cost: u64, set: Vec<Search>, from_search: bool) {
        let improved = cost < self.incumbent();
        self.best = Some((cost, set));
        self.best_from_search = from_search;
        if improved || self.history.is_empty() {
            self.history.push(Incumbent {
                objective: u128::from(cost),
                nodes: self.nodes,
                elapsed: self.start.elapsed(),
            });
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        if self.options.node_limit.is_some_and(|limit| self.nodes >= limit) {
            self.stopped = true;
        } else if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.options.time_limit {
                self.stopped = self.start.elapsed() >= limit;
            }
        }
        self.stopped
    }

    fn mirror_ok(&self) -> bool {
        let mut own: Vec<usize> = self.chosen.iter().map(|&c| self.pool.cands[c].rank).collect();
        let mut mirrored: Vec<usize> = self.chosen.iter().map(|&c| self.pool.cands[c].mirror_rank).collect();
        own.sort_unstable();
        mirrored.sort_unstable();
        own <= mirrored
    }

    fn dfs(&mut self, from: usize, covered: &[u64], cost: u64) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        let words = self.pool.words;
        let n = self.pool.cands.len();
        let uncovered: Vec<u64> = self.pool.all.iter().zip(covered).map(|(a, c)| a & !c).collect();
        if uncovered.iter().all(|&w| w == 0) {
            if !self.mirror || self.mirror_ok() {
                let inc = self.incumbent();
                if cost < inc || (cost == inc && !self.best_from_search) {
                    let set = self.chosen.iter().map(|&c| self.pool.cands[c].search.clone()).collect();
                    self.record(cost, set, true);
                }
            }
            return;
        }
        if self.chosen.len() == self.spec.max_searches || from == n {
            return;
        }
        if !subset(&uncovered, &self.suffix_union[from * words..(from + 1) * words]) {
            return;
        }
        let mut hardest = 0u64;
        for q in 0..self.n_patterns {
            if uncovered[q / 64] >> (q % 64) & 1 == 1 {
                hardest = hardest.max(self.min_cost[q * (n + 1) + from]);
            }
        }
        if self.hopeless(cost.saturating_add(hardest)) {
            return;
        }
        let last_slot = self.chosen.len() + 1 == self.spec.max_searches;
        for c in from..n {
            let cover = self.pool.cover(c);
            if cover.iter().zip(&uncovered).all(|(a, u)| a & u == 0) {
                continue;
            }
            if last_slot && !subset(&uncovered, cover) {
                continue;
            }
            let next = cost.saturating_add(self.pool.cands[c].cost);
            if self.hopeless(next) {
                continue;
            }
            if self.mirror {
                let first = self.chosen.first().copied().unwrap_or(c);
                if self.pool.cands[first].rank > self.pool.cands[c].mirror_rank {
                    continue;
                }
            }
            let merged: Vec<u64> = covered.iter().zip(cover).map(|(a, b)| a | b).collect();
            self.chosen.push(c);
            self.dfs(c + 1, &merged, next);
            self.chosen.pop();
            if self.stopped {
                return;
            }
        }
    }
}

/// The bundled optimal scheme for this `K` and `P` (or its mirror image, when
/// the partition is asymmetric and that is cheaper), priced for this
/// problem; plain backtracking if none applies.
fn warm_start(spec: &ProblemSpec, partition: &Partition) -> Option<(u64, Vec<Search>)> {
    let k = spec.max_errors;
    let p = spec.pieces;
    let lengths = partition.lengths();
    let symmetric = lengths.iter().eq(lengths.iter().rev());
    // A mirrored search on the partition behaves like the original on the
    // reversed partition, so mirrors are checked and priced without being built.
    let evaluate = |searches: &[Search], mirror: bool| -> Option<u64> {
        let piece = |j: usize| if mirror { p + 1 - j } else { j };
        let live = searches.iter().filter(|s| !s.is_empty());
        if live.clone().count() > spec.max_searches {
            return None;
        }
        let mut counts = [0u32; 16];
        let caps: Vec<u32> = (1..=p).map(|j| (lengths[piece(j) - 1] as u32).min(k)).collect();
        if !every_pattern(&caps, k, 0, &mut counts[..p], &mut |q| {
            live.clone().any(|s| {
                let mut cumulative = 0;
                s.pi.iter().zip(&s.lower).zip(&s.upper).all(|((&j, &lo), &hi)| {
                    cumulative += q[j - 1];
                    (lo..=hi).contains(&cumulative)
                })
            })
        }) {
            return None;
        }
        Some(live.fold(0u64, |acc, s| {
            let c = count_search_with(s, |j| partition.len_of(piece(j)), spec.sigma, k);
            acc.saturating_add(c.map_or(u64::MAX, |c| u64::try_from(c).unwrap_or(u64::MAX)))
        }))
    };
    let mut best: Option<(u64, &[Search], bool)> = None;
    let backtracking = SearchScheme::backtracking(k, p);
    let published = builtins_for(k, p)
        .find(|(name, _)| name.starts_with("opt_"))
        .map(|(_, s)| s);
    let offer = published.unwrap_or(&backtracking);
    for mirror in [false, true] {
        if mirror && symmetric {
            continue;
        }
        if let Some(cost) = evaluate(&offer.searches, mirror) {
            if best.is_none_or(|b| cost < b.0) {
                best = Some((cost, &offer.searches, mirror));
            }
        }
    }
    best.map(|(cost, searches, mirror)| {
        let mut searches: Vec<Search> = searches
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| if mirror { s.mirrored() } else { s.clone() })
            .collect();
        searches.sort_by(Search::canonical_cmp);
        (cost, searches)
    })
}

/// Calls `covered` on every distribution of at most `budget` errors over the
/// pieces (piece `j` taking at most `caps[j]`) until one returns false.
fn every_pattern(
    caps: &[u32],
    budget: u32,
    j: usize,
    counts: &mut [u32],
    covered: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if j == caps.len() {
        return covered(counts);
    }
    for a in 0..=caps[j].min(budget) {
        counts[j] = a;
        if !every_pattern(caps, budget - a, j + 1, counts, covered) {
            return false;
        }
    }
    counts[j] = 0;
    true
}

fn price(search: &Search, partition: &Partition, sigma: u32, max_errors: u32) -> u64 {
    count_search_streaming(search, partition, sigma, max_errors)
        .map_or(u64::MAX, |c| u64::try_from(c).unwrap_or(u64::MAX))
}

fn greedy(pool: &Pool, max_searches: usize, first: Option<usize>) -> Option<(u64, Vec<usize>)> {
    let words = pool.words;
    let mut covered = vec![0u64; words];
    let mut chosen = Vec::new();
    let mut cost = 0u64;
    let take = |c: usize, covered: &mut Vec<u64>, chosen: &mut Vec<usize>, cost: &mut u64| {
        for (w, b) in covered.iter_mut().zip(pool.cover(c)) {
            *w |= b;
        }
        chosen.push(c);
        *cost = cost.saturating_add(pool.cands[c].cost);
    };
    if let Some(c) = first {
        take(c, &mut covered, &mut chosen, &mut cost);
    }
    while covered != pool.all {
        if chosen.len() == max_searches {
            return None;
        }
        let mut best: Option<(usize, u32)> = None;
        for (c, cand) in pool.cands.iter().enumerate() {
            let gain: u32 = pool
                .cover(c)
                .iter()
                .zip(&covered)
                .map(|(a, b)| (a & !b).count_ones())
                .sum();
            if gain == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, g)) => {
                    u128::from(gain) * u128::from(pool.cands[b].cost) > u128::from(g) * u128::from(cand.cost)
                }
            };
            if better {
                best = Some((c, gain));
            }
        }
        let (c, _) = best?;
        take(c, &mut covered, &mut chosen, &mut cost);
    }
    chosen.sort_unstable();
    chosen.dedup();
    Some((cost, chosen))
}

/// Finds a minimum-cost feasible scheme with at most `spec.max_searches` searches.
pub fn solve_exact(spec: &ProblemSpec, options: &SolveOptions) -> Result<OptimizationResult, OptimizeError> {
    spec.validate()?;
    let start = Instant::now();
    let partition = spec.partition()?;
    let warm = if options.warm_start {
        warm_start(spec, &partition)
    } else {
        None
    };
    let warm_at = start.elapsed();
    let patterns = enumerate_mismatch_patterns(spec.max_errors, partition.lengths());
    let (pool, total) = build_pool(spec, &partition, &patterns, options.dominance);
    let n = pool.cands.len();
    let words = pool.words;

    let mut suffix_union = vec![0u64; (n + 1) * words];
    for c in (0..n).rev() {
        for w in 0..words {
            suffix_union[c * words + w] = suffix_union[(c + 1) * words + w] | pool.cover(c)[w];
        }
    }
    let mut min_cost = vec![u64::MAX; patterns.len() * (n + 1)];
    for q in 0..patterns.len() {
        let row = &mut min_cost[q * (n + 1)..(q + 1) * (n + 1)];
        for c in (0..n).rev() {
            let here = if pool.cover(c)[q / 64] >> (q % 64) & 1 == 1 {
                pool.cands[c].cost
            } else {
                u64::MAX
            };
            row[c] = row[c + 1].min(here);
        }
    }

    let mut state = Solver {
        pool: &pool,
        spec: *spec,
        mirror: options.mirror_symmetry && partition.is_symmetric() && spec.pieces > 1,
        suffix_union,
        min_cost,
        n_patterns: patterns.len(),
        best: None,
        best_from_search: false,
        chosen: Vec::new(),
        nodes: 0,
        start,
        options,
        stopped: false,
        history: Vec::new(),
    };

    if let Some((cost, searches)) = warm {
        state.best = Some((cost, searches));
        state.history.push(Incumbent {
            objective: u128::from(cost),
            nodes: 0,
            elapsed: warm_at,
        });
    }
    // Greedy starts: plain, and seeded with each candidate when affordable.
    let seeds: Vec<Option<usize>> = if n <= 4000 {
        std::iter::once(None).chain((0..n).map(Some)).collect()
    } else {
        vec![None]
    };
    for seed in seeds {
        if let Some((cost, set)) = greedy(&pool, spec.max_searches, seed) {
            if cost < state.incumbent() {
                let searches = set.iter().map(|&c| pool.cands[c].search.clone()).collect();
                state.record(cost, searches, false);
            }
        }
    }

    let status = if options.heuristic_only {
        if state.best.is_some() {
            ProofStatus::FeasibleOnly
        } else {
            ProofStatus::BudgetExhausted
        }
    } else {
        let words0 = vec![0u64; words];
        state.dfs(0, &words0, 0);
        match (state.stopped, state.best.is_some()) {
            (true, _) => ProofStatus::BudgetExhausted,
            (false, true) => ProofStatus::Optimal,
            (false, false) => ProofStatus::Infeasible,
        }
    };

    let (scheme, objective) = match &state.best {
        Some((cost, searches)) => {
            let scheme = SearchScheme::new(spec.max_errors, spec.pieces, searches.clone())
                .expect("candidates are valid searches")
                .canonicalized()
                .with_read_len(spec.read_len);
            let objective = count_edges_scheme(&scheme, &partition, spec.sigma).expect("non-empty searches");
            if *cost != u64::MAX {
                debug_assert_eq!(objective, BigUint::from(*cost));
            }
            (Some(scheme), Some(objective))
        }
        None => (None, None),
    };
    Ok(OptimizationResult {
        scheme,
        objective,
        status,
        stats: SolveStats {
            candidates: total,
            kept: n,
            nodes: state.nodes,
            elapsed: start.elapsed(),
            history: state.history,
        },
    })
}
