//! Explicit trie enumeration, used to check the recurrence.
//!
//! Walks a concrete read piece by piece in `pi` order, branching on every
//! symbol, and records each distinct enumerated prefix. Survival of a prefix
//! is decided from `(pi, L, U)` directly: within iteration `i` the running
//! error count may not exceed `U_i`, and it must still be able to reach `L_i`
//! with the positions left in the piece.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::TrieError;
use crate::partition::Partition;
use crate::scheme::Search;

/// Refuse instances with more than this many length-`R` strings.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

struct Walk<'a> {
    /// Read position visited at each level, and the iteration it belongs to.
    positions: Vec<(usize, usize)>,
    /// Positions of the current iteration still unvisited after each level.
    remaining: Vec<usize>,
    search: &'a Search,
    max_errors: u32,
    sigma: u8,
    read: Vec<u8>,
    seen: HashSet<Vec<u8>>,
}

impl Walk<'_> {
    fn descend(&mut self, prefix: &mut Vec<u8>, errors: u32) {
        let level = prefix.len();
        if level == self.positions.len() {
            return;
        }
        let (pos, iteration) = self.positions[level];
        let upper = self.search.upper[iteration].min(self.max_errors);
        let lower = self.search.lower[iteration];
        for c in 0..self.sigma {
            let d = errors + u32::from(c != self.read[pos]);
            if d > upper || d + (self.remaining[level] as u32) < lower {
                continue;
            }
            prefix.push(c);
            self.seen.insert(prefix.clone());
            self.descend(prefix, d);
            prefix.pop();
        }
    }
}

/// Counts the edges of the search trie by enumerating it.
pub fn brute_force_trie_count(
    search: &Search,
    partition: &Partition,
    sigma: u32,
    max_errors: u32,
    budget: u64,
) -> Result<BigUint, TrieError> {
    if search.pi.len() != partition.num_pieces() {
        return Err(TrieError::PieceCount {
            search: search.pi.len(),
            partition: partition.num_pieces(),
        });
    }
    if !(2..=255).contains(&sigma) {
        return Err(TrieError::Alphabet(sigma));
    }
    let read_len = partition.read_len();
    let over = u64::from(sigma)
        .checked_pow(read_len as u32)
        .is_none_or(|strings| strings > budget);
    if over {
        return Err(TrieError::BudgetExceeded {
            sigma,
            read_len,
            budget,
        });
    }
    if search.is_empty() {
        return Ok(BigUint::default());
    }

    let mut positions = Vec::with_capacity(read_len);
    let mut remaining = Vec::with_capacity(read_len);
    for (iteration, &piece) in search.pi.iter().enumerate() {
        let start = partition.start_of(piece);
        let len = partition.len_of(piece);
        for k in 0..len {
            positions.push((start + k, iteration));
            remaining.push(len - k - 1);
        }
    }
    // The count does not depend on the read's content; alternate symbols to
    // keep the walk honest about matches versus mismatches.
    let read = (0..read_len).map(|p| (p % sigma as usize) as u8).collect();
    let mut walk = Walk {
        positions,
        remaining,
        search,
        max_errors,
        sigma: sigma as u8,
        read,
        seen: HashSet::new(),
    };
    walk.descend(&mut Vec::with_capacity(read_len), 0);
    Ok(BigUint::from(walk.seen.len()))
}
