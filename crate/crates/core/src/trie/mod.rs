//! Analytic cost of a search scheme.
//!
//! A search enumerates a trie of substrings; its cost is the number of trie
//! edges when every string of length `R` occurs in the text. Level `l` of the
//! trie corresponds to the `l`-th read position visited in `pi` order. With
//! `lo[l]`/`hi[l]` the smallest and largest cumulative error count allowed at
//! level `l`, the number of edges ending at level `l` with `d` errors obeys
//!
//! ```text
//! n[l][d] = n[l-1][d] + (sigma - 1) * n[l-1][d-1]   for lo[l] <= d <= hi[l]
//! n[0][0] = 1
//! ```
//!
//! and is zero outside the bounds.

mod oracle;

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, One, Zero};
use thiserror::Error;

use crate::partition::Partition;
use crate::scheme::{Search, SearchScheme};

pub use oracle::{brute_force_trie_count, DEFAULT_ORACLE_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrieError {
    #[error("search {0} is empty (L > U); strip empty searches first")]
    EmptySearch(String),
    #[error("search has {search} pieces but the partition has {partition}")]
    PieceCount { search: usize, partition: usize },
    #[error("alphabet size must be at least 2, got {0}")]
    Alphabet(u32),
    #[error("weight vector has {got} entries, expected {expected}")]
    Weights { got: usize, expected: usize },
    #[error("brute-force trie needs {sigma}^{read_len} strings, above the budget of {budget}")]
    BudgetExceeded { sigma: u32, read_len: usize, budget: u64 },
}

/// Per-level cumulative error bounds, indexed by level `0..=R` (level 0 is the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelBounds {
    pub lo: Vec<u32>,
    pub hi: Vec<u32>,
}

impl LevelBounds {
    pub fn levels(&self) -> usize {
        self.lo.len() - 1
    }
}

/// Bounds on the cumulative error count at each trie level of `search`.
///
/// Pieces are taken in `pi` order with their own lengths, so the iteration
/// holding level `l` is the first whose cumulative length reaches `l`.
/// Upper bounds are capped at `max_errors`.
pub fn level_bounds(search: &Search, partition: &Partition, max_errors: u32) -> Result<LevelBounds, TrieError> {
    if search.pi.len() != partition.num_pieces() {
        return Err(TrieError::PieceCount {
            search: search.pi.len(),
            partition: partition.num_pieces(),
        });
    }
    if search.is_empty() {
        return Err(TrieError::EmptySearch(search.to_string()));
    }
    let levels = partition.read_len();
    let mut lo = Vec::with_capacity(levels + 1);
    let mut hi = Vec::with_capacity(levels + 1);
    lo.push(0);
    hi.push(0);
    let mut cumulative = 0usize;
    for (i, &piece) in search.pi.iter().enumerate() {
        let prev_lower = if i == 0 { 0 } else { search.lower[i - 1] };
        let upper = search.upper[i].min(max_errors);
        cumulative += partition.len_of(piece);
        let first_level = lo.len();
        for l in first_level..=cumulative {
            // Errors still needed to reach L_i with the levels left in this piece.
            let needed = search.lower[i] as i64 - (cumulative - l) as i64;
            lo.push(prev_lower.max(needed.max(0) as u32));
            let prev_hi = *hi.last().unwrap();
            hi.push(upper.min(prev_hi + 1));
        }
    }
    Ok(LevelBounds { lo, hi })
}

/// The `n[l][d]` table of one search.
#[derive(Debug, Clone)]
pub struct EdgeCountTable {
    pub sigma: u32,
    pub max_errors: u32,
    pub bounds: LevelBounds,
    /// `n[l][d]` for `l in 0..=R`, `d in 0..=K`.
    pub n: Vec<Vec<BigUint>>,
}

impl EdgeCountTable {
    pub fn build(search: &Search, partition: &Partition, sigma: u32, max_errors: u32) -> Result<Self, TrieError> {
        if sigma < 2 {
            return Err(TrieError::Alphabet(sigma));
        }
        let bounds = level_bounds(search, partition, max_errors)?;
        let width = max_errors as usize + 1;
        let mismatch = BigUint::from(sigma - 1);
        let mut n = Vec::with_capacity(bounds.lo.len());
        let mut root = vec![BigUint::zero(); width];
        root[0] = BigUint::from(1u32);
        n.push(root);
        for l in 1..bounds.lo.len() {
            let prev = &n[l - 1];
            let mut row = vec![BigUint::zero(); width];
            let (lo, hi) = (bounds.lo[l] as usize, bounds.hi[l] as usize);
            for d in lo..=hi.min(width - 1) {
                let mut v = prev[d].clone();
                if d > 0 {
                    v += &mismatch * &prev[d - 1];
                }
                row[d] = v;
            }
            n.push(row);
        }
        Ok(EdgeCountTable {
            sigma,
            max_errors,
            bounds,
            n,
        })
    }

    /// Edges per level `1..=R`.
    pub fn level_totals(&self) -> Vec<BigUint> {
        self.n[1..].iter().map(|row| row.iter().sum()).collect()
    }

    /// Total number of edges over all levels.
    pub fn total(&self) -> BigUint {
        self.n[1..].iter().flatten().sum()
    }

    /// Edge count with a weight per level (`weights[l-1]` for level `l`).
    pub fn weighted_total(&self, weights: &[f64]) -> Result<f64, TrieError> {
        let levels = self.n.len() - 1;
        if weights.len() != levels {
            return Err(TrieError::Weights {
                got: weights.len(),
                expected: levels,
            });
        }
        Ok(self
            .level_totals()
            .iter()
            .zip(weights)
            .map(|(count, w)| biguint_to_f64(count) * w)
            .sum())
    }
}

fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_string().parse().unwrap_or(f64::INFINITY)
}

/// Number of trie edges enumerated by one search.
pub fn count_edges_search(
    search: &Search,
    partition: &Partition,
    sigma: u32,
    max_errors: u32,
) -> Result<BigUint, TrieError> {
    Ok(EdgeCountTable::build(search, partition, sigma, max_errors)?.total())
}

/// Same count in 128-bit arithmetic; `None` on overflow.
pub fn count_edges_checked(
    search: &Search,
    partition: &Partition,
    sigma: u32,
    max_errors: u32,
) -> Result<Option<u128>, TrieError> {
    if sigma < 2 {
        return Err(TrieError::Alphabet(sigma));
    }
    let bounds = level_bounds(search, partition, max_errors)?;
    Ok(count_from_bounds(&bounds, sigma, max_errors))
}

pub(crate) fn count_from_bounds(bounds: &LevelBounds, sigma: u32, max_errors: u32) -> Option<u128> {
    let width = max_errors as usize + 1;
    let mismatch = u128::from(sigma - 1);
    let mut prev = vec![0u128; width];
    prev[0] = 1;
    let mut row = vec![0u128; width];
    let mut total = 0u128;
    for l in 1..bounds.lo.len() {
        row.iter_mut().for_each(|v| *v = 0);
        let (lo, hi) = (bounds.lo[l] as usize, (bounds.hi[l] as usize).min(width - 1));
        for d in lo..=hi {
            let mut v = prev[d];
            if d > 0 {
                v = v.checked_add(mismatch.checked_mul(prev[d - 1])?)?;
            }
            row[d] = v;
            total = total.checked_add(v)?;
        }
        std::mem::swap(&mut prev, &mut row);
    }
    Some(total)
}

/// [`level_bounds`] followed by [`count_from_bounds`] without building the
/// bound vectors; for the optimizer's inner loops. `None` on overflow or
/// when `K > 15`.
pub(crate) fn count_search_streaming(
    search: &Search,
    partition: &Partition,
    sigma: u32,
    max_errors: u32,
) -> Option<u128> {
    count_search_with(search, |j| partition.len_of(j), sigma, max_errors)
}

/// As [`count_search_streaming`], with piece lengths given by `len_of`.
pub(crate) fn count_search_with(
    search: &Search,
    len_of: impl Fn(usize) -> usize,
    sigma: u32,
    max_errors: u32,
) -> Option<u128> {
    // u64 arithmetic is markedly faster and almost always suffices
    match stream::<u64>(search, &len_of, sigma, max_errors) {
        Some(c) => Some(u128::from(c)),
        None => stream::<u128>(search, &len_of, sigma, max_errors),
    }
}

fn stream<T>(search: &Search, len_of: &impl Fn(usize) -> usize, sigma: u32, max_errors: u32) -> Option<T>
where
    T: Copy + Zero + One + CheckedAdd + CheckedMul + From<u32>,
{
    const MAX_WIDTH: usize = 16;
    if max_errors as usize >= MAX_WIDTH {
        return None;
    }
    let mismatch = T::from(sigma - 1);
    // one row updated in place, high errors first
    let mut row = [T::zero(); MAX_WIDTH];
    row[0] = T::one();
    let mut total = T::zero();
    let (mut lo_prev, mut hi_prev) = (0usize, 0usize);
    let mut cumulative = 0usize;
    for (i, &piece) in search.pi.iter().enumerate() {
        let prev_lower = if i == 0 { 0 } else { search.lower[i - 1] };
        let upper = search.upper[i].min(max_errors) as usize;
        let first = cumulative + 1;
        cumulative += len_of(piece);
        for l in first..=cumulative {
            let needed = search.lower[i] as i64 - (cumulative - l) as i64;
            let lo = prev_lower.max(needed.max(0) as u32) as usize;
            let hi = upper.min(hi_prev + 1);
            if hi < hi_prev {
                row[hi + 1..=hi_prev.min(MAX_WIDTH - 1)].fill(T::zero());
            }
            for d in (lo..=hi).rev() {
                if d > 0 {
                    row[d] = row[d].checked_add(&mismatch.checked_mul(&row[d - 1])?)?;
                }
                total = total.checked_add(&row[d])?;
            }
            let stale = lo.min(hi_prev + 1);
            if lo_prev < stale {
                row[lo_prev..stale].fill(T::zero());
            }
            (lo_prev, hi_prev) = (lo, hi);
        }
    }
    Some(total)
}

/// Edge count of every non-empty search of a scheme, in scheme order
/// (`None` for empty searches).
pub fn count_edges_per_search(
    scheme: &SearchScheme,
    partition: &Partition,
    sigma: u32,
) -> Result<Vec<Option<BigUint>>, TrieError> {
    scheme
        .searches
        .iter()
        .map(|s| {
            if s.is_empty() {
                Ok(None)
            } else {
                count_edges_search(s, partition, sigma, scheme.max_errors).map(Some)
            }
        })
        .collect()
}

/// Total edge count of a scheme; empty searches contribute nothing.
/// Feasibility is not required.
pub fn count_edges_scheme(scheme: &SearchScheme, partition: &Partition, sigma: u32) -> Result<BigUint, TrieError> {
    Ok(count_edges_per_search(scheme, partition, sigma)?
        .into_iter()
        .flatten()
        .sum())
}
