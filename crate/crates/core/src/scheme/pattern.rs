use std::collections::BTreeMap;
use std::fmt;

use super::{Search, SearchScheme};

/// How many errors fall into each piece: `counts[j]` for 0-based piece `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MismatchPattern {
    pub counts: Vec<u32>,
}

impl MismatchPattern {
    pub fn new(counts: Vec<u32>) -> Self {
        MismatchPattern { counts }
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }
}

impl fmt::Display for MismatchPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.iter().all(|&c| c < 10) {
            for c in &self.counts {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.counts.iter().map(ToString::to_string).collect();
            write!(f, "{}", parts.join("-"))
        }
    }
}

/// All mismatch patterns with at most `max_errors` errors over pieces of the
/// given lengths. Piece `j` holds at most `min(len_j, max_errors)` errors.
///
/// Ordered by total error count, then lexicographically.
pub fn enumerate_mismatch_patterns(max_errors: u32, piece_lengths: &[usize]) -> Vec<MismatchPattern> {
    let caps: Vec<u32> = piece_lengths
        .iter()
        .map(|&m| u32::try_from(m).unwrap_or(u32::MAX).min(max_errors))
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0u32; caps.len()];
    for total in 0..=max_errors {
        fill(&caps, 0, total, &mut current, &mut out);
    }
    out
}

fn fill(caps: &[u32], j: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<MismatchPattern>) {
    if j == caps.len() {
        if remaining == 0 {
            out.push(MismatchPattern::new(current.clone()));
        }
        return;
    }
    let rest_cap: u32 = caps[j + 1..].iter().sum();
    for a in 0..=caps[j].min(remaining) {
        if remaining - a > rest_cap {
            continue;
        }
        current[j] = a;
        fill(caps, j + 1, remaining - a, current, out);
    }
    current[j] = 0;
}

/// `sum_{h=0}^{K} C(h + P - 1, h)`: the pattern count when no piece is shorter than `K`.
pub fn pattern_count(max_errors: u32, num_pieces: usize) -> u128 {
    (0..=max_errors as u128)
        .map(|h| binomial(h + num_pieces as u128 - 1, h))
        .sum()
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// True when the cumulative error count of `pattern`, taken in `pi` order,
/// stays within `[L_i, U_i]` at every iteration.
pub fn covers(search: &Search, pattern: &MismatchPattern) -> bool {
    let mut cumulative = 0u32;
    for ((&piece, &lo), &hi) in search.pi.iter().zip(&search.lower).zip(&search.upper) {
        cumulative += pattern.counts[piece - 1];
        if cumulative < lo || cumulative > hi {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub uncovered: Vec<MismatchPattern>,
    /// Number of searches covering each pattern.
    pub multiplicity: BTreeMap<MismatchPattern, usize>,
}

impl FeasibilityReport {
    /// Patterns covered by more than one search.
    pub fn redundant(&self) -> impl Iterator<Item = (&MismatchPattern, &usize)> {
        self.multiplicity.iter().filter(|(_, &c)| c > 1)
    }
}

/// Checks that every mismatch pattern is covered by at least one search.
pub fn is_feasible(scheme: &SearchScheme, piece_lengths: &[usize]) -> FeasibilityReport {
    let patterns = enumerate_mismatch_patterns(scheme.max_errors, piece_lengths);
    let mut multiplicity = BTreeMap::new();
    let mut uncovered = Vec::new();
    for q in patterns {
        let count = scheme.searches.iter().filter(|s| covers(s, &q)).count();
        if count == 0 {
            uncovered.push(q.clone());
        }
        multiplicity.insert(q, count);
    }
    FeasibilityReport {
        feasible: uncovered.is_empty(),
        uncovered,
        multiplicity,
    }
}
