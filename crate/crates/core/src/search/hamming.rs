use super::{report, Occurrence, PreparedSearch};
use crate::index::{BidirectionalIndex, IntervalPair};

struct Walker<'a> {
    ix: &'a BidirectionalIndex,
    read: &'a [u8],
    /// Read position and direction per level.
    levels: Vec<(usize, bool)>,
    lo: &'a [u32],
    hi: &'a [u32],
    sigma: u8,
    search_idx: usize,
    steps: u64,
    out: &'a mut Vec<Occurrence>,
}

impl Walker<'_> {
    fn descend(&mut self, pair: IntervalPair, level: usize, errors: u32) {
        if level == self.levels.len() {
            report(self.ix, pair, errors, self.search_idx, self.out);
            return;
        }
        let (pos, rightward) = self.levels[level];
        let (lo, hi) = (self.lo[level + 1], self.hi[level + 1]);
        let want = self.read[pos];
        for c in 0..self.sigma {
            let d = errors + u32::from(c != want);
            if d < lo || d > hi {
                continue;
            }
            let next = if rightward {
                self.ix.extend_right(pair, c)
            } else {
                self.ix.extend_left(pair, c)
            };
            self.steps += 1;
            if !next.is_empty() {
                self.descend(next, level + 1, d);
            }
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
    let levels = search
        .steps
        .iter()
        .flat_map(|st| (0..st.len).map(move |k| (st.position(k), st.rightward)))
        .collect();
    let mut w = Walker {
        ix,
        read,
        levels,
        lo: &search.lo,
        hi: &search.hi,
        sigma: ix.sigma() as u8,
        search_idx,
        steps: 0,
        out,
    };
    w.descend(ix.full_interval(), 0, 0);
    w.steps
}
