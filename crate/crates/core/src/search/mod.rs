//! Running search schemes over a [`BidirectionalIndex`].
//!
//! Each search walks the read's pieces in `pi` order. The first piece is
//! matched towards the side of the second one, every later piece towards its
//! own side, so the matched text always grows at the end next to the piece
//! being processed. Reads use the index's codes; the wildcard code mismatches
//! every text symbol, and text wildcards (including record separators) are
//! never matched.

mod edit;
mod hamming;
mod strata;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::index::{BidirectionalIndex, IntervalPair};
use crate::partition::{Partition, PartitionError};
use crate::scheme::{is_feasible, SearchScheme};
use crate::trie::{level_bounds, TrieError};

pub use strata::search_strata;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Bounds(#[from] TrieError),
    #[error("scheme has {scheme} pieces but the read cannot be split into them: {reason}")]
    Pieces { scheme: usize, reason: String },
    #[error("scheme allows {scheme} errors, fewer than the requested {requested}")]
    TooFewErrors { scheme: u32, requested: u32 },
    #[error("no scheme given for {0} errors")]
    MissingScheme(u32),
    #[error("stratum width {width} exceeds the error bound {max_errors}")]
    Stratum { width: u32, max_errors: u32 },
    #[error("failed to start worker threads: {0}")]
    Threads(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Distance {
    #[default]
    Hamming,
    Edit,
}

/// One reported match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub record: usize,
    /// Start of the matched substring inside its record.
    pub position: usize,
    pub errors: u32,
    /// Index of the first search that found it.
    pub search_idx: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Calls to `extend_left` / `extend_right`.
    pub extension_steps: u64,
    pub reported: usize,
    pub per_search: Vec<u64>,
}

impl SearchStats {
    fn with_searches(n: usize) -> Self {
        SearchStats {
            per_search: vec![0; n],
            ..Default::default()
        }
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.extension_steps += other.extension_steps;
        self.reported += other.reported;
        if self.per_search.len() < other.per_search.len() {
            self.per_search.resize(other.per_search.len(), 0);
        }
        for (a, b) in self.per_search.iter_mut().zip(&other.per_search) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub occurrences: Vec<Occurrence>,
    pub stats: SearchStats,
    /// The scheme does not cover every mismatch pattern; matches may be missing.
    pub incomplete: bool,
}

/// A piece as visited by one search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    pub start: usize,
    pub len: usize,
    pub rightward: bool,
    pub lower: u32,
    pub upper: u32,
}

impl Step {
    /// Read position of the `k`-th symbol visited in this piece.
    #[inline]
    pub fn position(&self, k: usize) -> usize {
        if self.rightward {
            self.start + k
        } else {
            self.start + self.len - 1 - k
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PreparedSearch {
    /// Position in the scheme's search list.
    pub index: usize,
    pub steps: Vec<Step>,
    /// Per-level cumulative error bounds (Hamming pruning).
    pub lo: Vec<u32>,
    pub hi: Vec<u32>,
}

/// A scheme laid out for one read length and error bound.
#[derive(Debug, Clone)]
pub struct PreparedScheme {
    pub(crate) searches: Vec<PreparedSearch>,
    pub(crate) read_len: usize,
    pub(crate) max_errors: u32,
    num_searches: usize,
    feasible: bool,
}

impl PreparedScheme {
    /// `max_errors` may be below the scheme's own bound (upper bounds are then
    /// capped), not above it.
    pub fn new(scheme: &SearchScheme, read_len: usize, max_errors: u32) -> Result<Self, SearchError> {
        if max_errors > scheme.max_errors {
            return Err(SearchError::TooFewErrors {
                scheme: scheme.max_errors,
                requested: max_errors,
            });
        }
        let partition = Partition::even(read_len, scheme.num_pieces).map_err(|e| SearchError::Pieces {
            scheme: scheme.num_pieces,
            reason: e.to_string(),
        })?;
        let mut searches = Vec::with_capacity(scheme.searches.len());
        for (index, s) in scheme.searches.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let bounds = level_bounds(s, &partition, max_errors)?;
            let p = s.pi.len();
            let steps =
                s.pi.iter()
                    .enumerate()
                    .map(|(i, &piece)| {
                        let rightward = match i {
                            0 if p == 1 => true,
                            0 => s.pi[1] > piece,
                            _ => piece > s.pi[0],
                        };
                        Step {
                            start: partition.start_of(piece),
                            len: partition.len_of(piece),
                            rightward,
                            lower: s.lower[i],
                            upper: s.upper[i].min(max_errors),
                        }
                    })
                    .collect();
            searches.push(PreparedSearch {
                index,
                steps,
                lo: bounds.lo,
                hi: bounds.hi,
            });
        }
        let check = SearchScheme {
            max_errors,
            ..scheme.strip_empty_searches()
        };
        let feasible = is_feasible(&check, partition.lengths()).feasible;
        Ok(PreparedScheme {
            searches,
            read_len,
            max_errors,
            num_searches: scheme.searches.len(),
            feasible,
        })
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    pub fn max_errors(&self) -> u32 {
        self.max_errors
    }

    pub fn num_searches(&self) -> usize {
        self.num_searches
    }

    /// Runs every search on `read` (codes of the index's alphabet).
    pub fn run(&self, ix: &BidirectionalIndex, read: &[u8], distance: Distance) -> SearchResult {
        assert_eq!(
            read.len(),
            self.read_len,
            "read length differs from the prepared length"
        );
        let mut stats = SearchStats::with_searches(self.num_searches);
        let mut raw = Vec::new();
        for search in &self.searches {
            let idx = search.index;
            let before = raw.len();
            let steps = match distance {
                Distance::Hamming => hamming::run(ix, read, search, idx, &mut raw),
                Distance::Edit => edit::run(ix, read, search, idx, &mut raw),
            };
            stats.per_search[idx] = steps;
            stats.extension_steps += steps;
            debug_assert!(raw[before..].iter().all(|o| o.errors <= self.max_errors));
        }
        let occurrences = dedupe(raw);
        stats.reported = occurrences.len();
        SearchResult {
            occurrences,
            stats,
            incomplete: !self.feasible,
        }
    }
}

fn run_one(
    ix: &BidirectionalIndex,
    read: &[u8],
    scheme: &SearchScheme,
    max_errors: u32,
    distance: Distance,
) -> Result<SearchResult, SearchError> {
    Ok(PreparedScheme::new(scheme, read.len(), max_errors)?.run(ix, read, distance))
}

/// All positions whose length-`R` window is within Hamming distance `max_errors` of `read`.
pub fn search_hamming(
    ix: &BidirectionalIndex,
    read: &[u8],
    scheme: &SearchScheme,
    max_errors: u32,
) -> Result<SearchResult, SearchError> {
    run_one(ix, read, scheme, max_errors, Distance::Hamming)
}

/// All start positions of substrings within edit distance `max_errors` of `read`.
pub fn search_edit(
    ix: &BidirectionalIndex,
    read: &[u8],
    scheme: &SearchScheme,
    max_errors: u32,
) -> Result<SearchResult, SearchError> {
    run_one(ix, read, scheme, max_errors, Distance::Edit)
}

/// One occurrence per `(record, position)`, keeping the fewest errors and then
/// the earliest search; sorted by record and position.
pub fn dedupe(raw: impl IntoIterator<Item = Occurrence>) -> Vec<Occurrence> {
    let mut best: BTreeMap<(usize, usize), Occurrence> = BTreeMap::new();
    for occ in raw {
        best.entry((occ.record, occ.position))
            .and_modify(|kept| {
                if (occ.errors, occ.search_idx) < (kept.errors, kept.search_idx) {
                    *kept = occ;
                }
            })
            .or_insert(occ);
    }
    best.into_values().collect()
}

/// Pushes every text occurrence of `pair` as an [`Occurrence`].
pub(crate) fn report(
    ix: &BidirectionalIndex,
    pair: IntervalPair,
    errors: u32,
    search_idx: usize,
    out: &mut Vec<Occurrence>,
) {
    for row in pair.fwd() {
        let (record, position) = ix.resolve(ix.suffix_at(row));
        out.push(Occurrence {
            record,
            position,
            errors,
            search_idx,
        });
    }
}

/// Searches many reads, in parallel when `threads > 1`. Results keep read order.
///
/// Reads of differing lengths get their own prepared layout.
pub fn search_batch(
    ix: &BidirectionalIndex,
    reads: &[Vec<u8>],
    scheme: &SearchScheme,
    max_errors: u32,
    distance: Distance,
    threads: usize,
) -> Result<Vec<SearchResult>, SearchError> {
    let mut prepared: BTreeMap<usize, PreparedScheme> = BTreeMap::new();
    for r in reads {
        if let std::collections::btree_map::Entry::Vacant(e) = prepared.entry(r.len()) {
            e.insert(PreparedScheme::new(scheme, r.len(), max_errors)?);
        }
    }
    let one = |r: &Vec<u8>| prepared[&r.len()].run(ix, r, distance);
    if threads <= 1 {
        return Ok(reads.iter().map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SearchError::Threads(e.to_string()))?;
    Ok(pool.install(|| reads.par_iter().map(one).collect()))
}

/// Reverse complement of an encoded read under the index's alphabet.
pub fn reverse_complement(ix: &BidirectionalIndex, read: &[u8]) -> Vec<u8> {
    read.iter().rev().map(|&c| ix.alphabet().complement(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Alphabet;
    use crate::scheme::builtin;

    fn ab_index(text: &str) -> BidirectionalIndex {
        let ab = Alphabet::new(b"ab", None).unwrap();
        BidirectionalIndex::from_text(text.as_bytes(), ab, 2).unwrap()
    }

    fn enc(ix: &BidirectionalIndex, s: &str) -> Vec<u8> {
        ix.alphabet().encode(s.as_bytes()).unwrap()
    }

    #[test]
    fn exact_read_found_by_the_search_covering_000() {
        let ix = ab_index("abbaaa");
        let scheme = builtin("opt_k2_p3").unwrap();
        let res = search_hamming(&ix, &enc(&ix, "abbaaa"), &scheme, 2).unwrap();
        let exact: Vec<_> = res.occurrences.iter().filter(|o| o.errors == 0).collect();
        assert_eq!(exact.len(), 1);
        assert_eq!(exact[0].position, 0);
        // the backward search is the only one covering the error-free pattern
        assert_eq!(scheme.searches[exact[0].search_idx].to_string(), "(321,000,022)");
        assert!(!res.incomplete);
    }

    #[test]
    fn absent_read() {
        let ix = ab_index("aaaaaaaaaa");
        let scheme = builtin("opt_k2_p3").unwrap();
        let res = search_hamming(&ix, &enc(&ix, "bbbbba"), &scheme, 2).unwrap();
        assert!(res.occurrences.is_empty());
    }

    #[test]
    fn redundant_coverage_is_reported_once() {
        let ix = ab_index("abbaaaabab");
        let lam = builtin("lam_k2_p3").unwrap();
        let read = enc(&ix, "abbaaa");
        let res = search_hamming(&ix, &read, &lam, 2).unwrap();
        let positions: Vec<_> = res.occurrences.iter().map(|o| o.position).collect();
        let mut sorted = positions.clone();
        sorted.dedup();
        assert_eq!(positions, sorted);
        assert!(positions.contains(&0));
    }

    #[test]
    fn dedupe_keeps_minimum() {
        let o = |errors, search_idx| Occurrence {
            record: 0,
            position: 7,
            errors,
            search_idx,
        };
        assert_eq!(dedupe(vec![o(2, 0), o(1, 1)]), vec![o(1, 1)]);
        let unique = vec![o(0, 0), Occurrence { position: 9, ..o(1, 0) }];
        assert_eq!(dedupe(unique.clone()), unique);
    }

    #[test]
    fn infeasible_scheme_sets_flag() {
        let ix = ab_index("abbaaaabab");
        let scheme = SearchScheme::from_compact(2, 3, &["123,000,022"]).unwrap();
        let res = search_hamming(&ix, &enc(&ix, "abbaaa"), &scheme, 2).unwrap();
        assert!(res.incomplete);
    }

    #[test]
    fn directions() {
        let scheme = SearchScheme::from_compact(2, 3, &["231,011,012", "321,000,022"]).unwrap();
        let p = PreparedScheme::new(&scheme, 6, 2).unwrap();
        let dirs: Vec<Vec<bool>> = p
            .searches
            .iter()
            .map(|s| s.steps.iter().map(|st| st.rightward).collect())
            .collect();
        assert_eq!(dirs, vec![vec![true, true, false], vec![false, false, false]]);
        assert_eq!(p.searches[0].steps[0].position(0), 2);
        assert_eq!(p.searches[1].steps[0].position(0), 5);
    }
}
