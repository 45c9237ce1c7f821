//! Edit-distance execution of one search.
//!
//! At every point of an iteration the walker may match or substitute the
//! next read symbol (extend and consume), insert a text symbol (extend only)
//! or delete the read symbol (consume only). Insertions are allowed before
//! the first and after the last symbol of each piece, so gaps between pieces
//! can be charged to either neighbour. An insertion directly next to a
//! deletion is never needed: a substitution does the same with fewer errors.
//! The running count must stay within `U_i`; `L_i` is checked when the
//! iteration ends.

use super::{report, Occurrence, PreparedSearch, Step};
use crate::index::{BidirectionalIndex, IntervalPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Last {
    Other,
    Insertion,
    Deletion,
}

struct Walker<'a> {
    ix: &'a BidirectionalIndex,
    read: &'a [u8],
    steps_of: &'a [Step],
    sigma: u8,
    search_idx: usize,
    steps: u64,
    out: &'a mut Vec<Occurrence>,
}

impl Walker<'_> {
    #[inline]
    fn extend(&mut self, pair: IntervalPair, c: u8, rightward: bool) -> IntervalPair {
        self.steps += 1;
        if rightward {
            self.ix.extend_right(pair, c)
        } else {
            self.ix.extend_left(pair, c)
        }
    }

    fn descend(&mut self, iteration: usize, k: usize, pair: IntervalPair, errors: u32, last: Last) {
        let step = self.steps_of[iteration];
        let budget = errors < step.upper;

        if k == step.len && errors >= step.lower {
            if iteration + 1 == self.steps_of.len() {
                if pair.length > 0 {
                    report(self.ix, pair, errors, self.search_idx, self.out);
                }
            } else {
                self.descend(iteration + 1, 0, pair, errors, Last::Other);
            }
        }

        if budget && last != Last::Deletion {
            for c in 0..self.sigma {
                let next = self.extend(pair, c, step.rightward);
                if !next.is_empty() {
                    self.descend(iteration, k, next, errors + 1, Last::Insertion);
                }
            }
        }
        if k == step.len {
            return;
        }

        let want = self.read[step.position(k)];
        for c in 0..self.sigma {
            let d = errors + u32::from(c != want);
            if d > step.upper {
                continue;
            }
            let next = self.extend(pair, c, step.rightward);
            if !next.is_empty() {
                self.descend(iteration, k + 1, next, d, Last::Other);
            }
        }
        if budget && last != Last::Insertion {
            self.descend(iteration, k + 1, pair, errors + 1, Last::Deletion);
        }
    }
}

/// Runs one search; returns the number of extension steps.
pub(super) fn run(
    ix: &BidirectionalIndex,
    read: &[u8],
    search: &PreparedSearch,
    search_idx: usize,
    out: &mut Vec<Occurrence>,
) -> u64 {
    let mut w = Walker {
        ix,
        read,
        steps_of: &search.steps,
        sigma: ix.sigma() as u8,
        search_idx,
        steps: 0,
        out,
    };
    w.descend(0, 0, ix.full_interval(), 0, Last::Other);
    w.steps
}
