//! Rank structures over a BWT: per-symbol bit masks in 64-position blocks
//! with cumulative counts at block boundaries.

const BLOCK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccTable {
    codes: usize,
    len: usize,
    /// `counts[b * codes + c]`: occurrences of `c` before block `b`.
    counts: Vec<u32>,
    /// `masks[b * codes + c]`: positions of `c` inside block `b`.
    masks: Vec<u64>,
}

impl OccTable {
    /// Symbols `>= codes` (the sentinel) are not counted.
    pub fn new(bwt: &[u8], codes: usize) -> Self {
        let blocks = bwt.len() / BLOCK + 1;
        let mut counts = vec![0u32; blocks * codes];
        let mut masks = vec![0u64; blocks * codes];
        let mut running = vec![0u32; codes];
        for b in 0..blocks {
            counts[b * codes..(b + 1) * codes].copy_from_slice(&running);
            let end = ((b + 1) * BLOCK).min(bwt.len());
            for (off, &sym) in bwt[b * BLOCK..end].iter().enumerate() {
                let c = sym as usize;
                if c < codes {
                    masks[b * codes + c] |= 1u64 << off;
                    running[c] += 1;
                }
            }
        }
        OccTable {
            codes,
            len: bwt.len(),
            counts,
            masks,
        }
    }

    /// Occurrences of `c` in `bwt[..i]`.
    #[inline]
    pub fn occ(&self, c: u8, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let slot = (i / BLOCK) * self.codes + c as usize;
        let below = (1u64 << (i % BLOCK)) - 1;
        self.counts[slot] as usize + (self.masks[slot] & below).count_ones() as usize
    }

    /// Occurrences of every code in `bwt[..i]`, written into `out`.
    #[inline]
    pub fn occ_all(&self, i: usize, out: &mut [usize]) {
        let base = (i / BLOCK) * self.codes;
        let below = (1u64 << (i % BLOCK)) - 1;
        for (c, slot) in out.iter_mut().enumerate().take(self.codes) {
            *slot = self.counts[base + c] as usize + (self.masks[base + c] & below).count_ones() as usize;
        }
    }

    pub fn codes(&self) -> usize {
        self.codes
    }
}

/// Bit vector with constant-time rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBits {
    words: Vec<u64>,
    before: Vec<u32>,
    len: usize,
}

impl RankBits {
    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut before = Vec::with_capacity(words.len() + 1);
        let mut sum = 0u32;
        for w in &words {
            before.push(sum);
            sum += w.count_ones();
        }
        before.push(sum);
        RankBits { words, before, len }
    }

    pub fn from_bools(bits: impl ExactSizeIterator<Item = bool>) -> Self {
        let len = bits.len();
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, b) in bits.enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        RankBits::from_words(words, len)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Set bits in `[0, i)`.
    #[inline]
    pub fn rank(&self, i: usize) -> usize {
        let w = i / 64;
        let r = i % 64;
        let partial = if r == 0 {
            0
        } else {
            (self.words[w] & ((1u64 << r) - 1)).count_ones()
        };
        (self.before[w] + partial) as usize
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        *self.before.last().unwrap_or(&0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn occ_matches_scan(bwt in proptest::collection::vec(0u8..6, 0..500)) {
            // code 5 plays the sentinel and is not counted
            let table = OccTable::new(&bwt, 5);
            let mut all = vec![0usize; 5];
            for i in 0..=bwt.len() {
                table.occ_all(i, &mut all);
                for c in 0..5u8 {
                    let naive = bwt[..i].iter().filter(|&&x| x == c).count();
                    prop_assert_eq!(table.occ(c, i), naive);
                    prop_assert_eq!(all[c as usize], naive);
                }
            }
        }

        #[test]
        fn rank_matches_scan(bits in proptest::collection::vec(any::<bool>(), 0..400)) {
            let rb = RankBits::from_bools(bits.iter().copied());
            for i in 0..=bits.len() {
                prop_assert_eq!(rb.rank(i), bits[..i].iter().filter(|&&b| b).count());
            }
            for (i, &b) in bits.iter().enumerate() {
                prop_assert_eq!(rb.get(i), b);
            }
        }
    }
}
