//! Bidirectional FM-index.
//!
//! Holds the BWT of the text and of the reversed text, each followed by a
//! sentinel that sorts before every symbol. A pair of synchronized BWT
//! intervals represents one substring `W`: the forward interval covers the
//! suffixes of the text starting with `W`, the reverse interval the suffixes
//! of the reversed text starting with `W` reversed. Either end of `W` can be
//! extended by one symbol in constant time.
//!
//! Multiple records are concatenated with a wildcard-class separator, which
//! search never extends over, so no match spans two records.

mod alphabet;
mod io;
mod rank;
mod sais;

use std::ops::Range;

use thiserror::Error;

pub use alphabet::{Alphabet, AlphabetError};
pub use io::{FORMAT_VERSION, MAGIC};
pub use rank::{OccTable, RankBits};
pub use sais::suffix_array;

/// BWT code of the sentinel.
pub const SENTINEL: u8 = u8::MAX;

/// Default suffix array sampling rate.
pub const DEFAULT_SA_RATE: usize = 32;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("cannot index an empty text")]
    EmptyText,
    #[error("suffix array sampling rate must be at least 1")]
    SaRate,
    #[error("text of {0} symbols is too long for 32-bit positions")]
    TooLong(usize),
    #[error("index file I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("index file version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("index file is corrupted: {0}")]
    Corrupt(String),
}

/// A named stretch of the indexed text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    /// Offset of the record's first symbol in the concatenated text.
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bwt {
    pub(crate) symbols: Vec<u8>,
    pub(crate) sentinel_row: usize,
    pub(crate) occ: OccTable,
}

impl Bwt {
    fn from_sa(text: &[u8], sa: &[u32], codes: usize) -> Self {
        let mut sentinel_row = 0;
        let symbols: Vec<u8> = sa
            .iter()
            .enumerate()
            .map(|(row, &p)| {
                if p == 0 {
                    sentinel_row = row;
                    SENTINEL
                } else {
                    text[p as usize - 1]
                }
            })
            .collect();
        Bwt::from_symbols(symbols, sentinel_row, codes)
    }

    pub(crate) fn from_symbols(symbols: Vec<u8>, sentinel_row: usize, codes: usize) -> Self {
        let occ = OccTable::new(&symbols, codes);
        Bwt {
            symbols,
            sentinel_row,
            occ,
        }
    }

    /// Width of `[lo, lo + width)` restricted to symbols smaller than `c`,
    /// counting the sentinel.
    #[inline]
    fn smaller(&self, c: u8, lo: usize, hi: usize) -> usize {
        let mut n = usize::from((lo..hi).contains(&self.sentinel_row));
        for b in 0..c {
            n += self.occ.occ(b, hi) - self.occ.occ(b, lo);
        }
        n
    }
}

/// Synchronized intervals of one substring in the forward and reverse BWTs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalPair {
    pub fwd_start: usize,
    pub rev_start: usize,
    pub width: usize,
    /// Length of the represented substring.
    pub length: usize,
}

impl IntervalPair {
    pub fn fwd(&self) -> Range<usize> {
        self.fwd_start..self.fwd_start + self.width
    }

    pub fn rev(&self) -> Range<usize> {
        self.rev_start..self.rev_start + self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidirectionalIndex {
    pub(crate) alphabet: Alphabet,
    pub(crate) text_len: usize,
    pub(crate) fwd: Bwt,
    pub(crate) rev: Bwt,
    /// `c_table[c]`: rows of suffixes starting with a code below `c`, sentinel included.
    pub(crate) c_table: Vec<usize>,
    pub(crate) sa_rate: usize,
    pub(crate) sampled_rows: RankBits,
    pub(crate) sa_samples: Vec<u32>,
    pub(crate) records: Vec<Record>,
}

impl BidirectionalIndex {
    /// Indexes an already encoded text (codes `0..=sigma`, `sigma` being the wildcard).
    pub fn build(text: &[u8], alphabet: Alphabet, sa_rate: usize) -> Result<Self, IndexError> {
        let records = vec![Record {
            name: "text".to_string(),
            start: 0,
            len: text.len(),
        }];
        Self::build_with_records(text, alphabet, sa_rate, records)
    }

    /// Encodes and indexes a single text.
    pub fn from_text(text: &[u8], alphabet: Alphabet, sa_rate: usize) -> Result<Self, IndexError> {
        let codes = alphabet.encode(text)?;
        Self::build(&codes, alphabet, sa_rate)
    }

    /// Encodes and indexes several named sequences, separated by the wildcard code.
    pub fn from_records<N: Into<String>>(
        records: impl IntoIterator<Item = (N, Vec<u8>)>,
        alphabet: Alphabet,
        sa_rate: usize,
    ) -> Result<Self, IndexError> {
        let mut text = Vec::new();
        let mut table = Vec::new();
        for (name, seq) in records {
            if !table.is_empty() {
                text.push(alphabet.wildcard_code());
            }
            let codes = alphabet.encode(&seq).map_err(|e| match e {
                AlphabetError::InvalidSymbol { position, symbol } => AlphabetError::InvalidSymbol {
                    position: text.len() + position,
                    symbol,
                },
                other => other,
            })?;
            table.push(Record {
                name: name.into(),
                start: text.len(),
                len: codes.len(),
            });
            text.extend_from_slice(&codes);
        }
        Self::build_with_records(&text, alphabet, sa_rate, table)
    }

    fn build_with_records(
        text: &[u8],
        alphabet: Alphabet,
        sa_rate: usize,
        records: Vec<Record>,
    ) -> Result<Self, IndexError> {
        if text.is_empty() {
            return Err(IndexError::EmptyText);
        }
        if sa_rate == 0 {
            return Err(IndexError::SaRate);
        }
        if text.len() >= (u32::MAX - 2) as usize {
            return Err(IndexError::TooLong(text.len()));
        }
        let codes = alphabet.sigma() + 1;
        if let Some(position) = text.iter().position(|&c| c as usize >= codes) {
            return Err(AlphabetError::InvalidSymbol {
                position,
                symbol: text[position] as char,
            }
            .into());
        }

        let sa = suffix_array(text, codes);
        let fwd = Bwt::from_sa(text, &sa, codes);
        let sampled_rows = RankBits::from_bools(sa.iter().map(|&p| (p as usize).is_multiple_of(sa_rate)));
        let sa_samples = sa
            .iter()
            .copied()
            .filter(|&p| (p as usize).is_multiple_of(sa_rate))
            .collect();
        drop(sa);

        let reversed: Vec<u8> = text.iter().rev().copied().collect();
        let rev_sa = suffix_array(&reversed, codes);
        let rev = Bwt::from_sa(&reversed, &rev_sa, codes);

        let c_table = c_table_of(text, codes);
        Ok(BidirectionalIndex {
            alphabet,
            text_len: text.len(),
            fwd,
            rev,
            c_table,
            sa_rate,
            sampled_rows,
            sa_samples,
            records,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of real symbols.
    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    /// Text length `T`, without the sentinel.
    pub fn text_len(&self) -> usize {
        self.text_len
    }

    pub fn sa_rate(&self) -> usize {
        self.sa_rate
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// The interval pair of the empty string: every suffix, width `T + 1`.
    pub fn full_interval(&self) -> IntervalPair {
        IntervalPair {
            fwd_start: 0,
            rev_start: 0,
            width: self.text_len + 1,
            length: 0,
        }
    }

    /// `W -> cW`.
    #[inline]
    pub fn extend_left(&self, pair: IntervalPair, c: u8) -> IntervalPair {
        let (lo, hi) = (pair.fwd_start, pair.fwd_start + pair.width);
        let below = self.fwd.occ.occ(c, lo);
        let width = self.fwd.occ.occ(c, hi) - below;
        IntervalPair {
            fwd_start: self.c_table[c as usize] + below,
            rev_start: pair.rev_start + self.fwd.smaller(c, lo, hi),
            width,
            length: pair.length + 1,
        }
    }

    /// `W -> Wc`.
    #[inline]
    pub fn extend_right(&self, pair: IntervalPair, c: u8) -> IntervalPair {
        let (lo, hi) = (pair.rev_start, pair.rev_start + pair.width);
        let below = self.rev.occ.occ(c, lo);
        let width = self.rev.occ.occ(c, hi) - below;
        IntervalPair {
            fwd_start: pair.fwd_start + self.rev.smaller(c, lo, hi),
            rev_start: self.c_table[c as usize] + below,
            width,
            length: pair.length + 1,
        }
    }

    /// Interval pair of `pattern` (codes), built by right extensions.
    pub fn find(&self, pattern: &[u8]) -> IntervalPair {
        let mut pair = self.full_interval();
        for &c in pattern {
            if pair.is_empty() {
                break;
            }
            pair = self.extend_right(pair, c);
        }
        pair
    }

    /// Number of occurrences of `pattern` (codes).
    pub fn count(&self, pattern: &[u8]) -> usize {
        self.find(pattern).width
    }

    #[inline]
    fn lf(&self, row: usize) -> usize {
        let c = self.fwd.symbols[row];
        self.c_table[c as usize] + self.fwd.occ.occ(c, row)
    }

    /// Text position of the suffix at forward row `row`.
    pub fn suffix_at(&self, mut row: usize) -> usize {
        let mut steps = 0;
        while !self.sampled_rows.get(row) {
            row = self.lf(row);
            steps += 1;
        }
        self.sa_samples[self.sampled_rows.rank(row)] as usize + steps
    }

    /// Sorted start positions (in the concatenated text) of the substring.
    pub fn locate(&self, pair: IntervalPair) -> Vec<usize> {
        let mut out: Vec<usize> = pair.fwd().map(|row| self.suffix_at(row)).collect();
        out.sort_unstable();
        out
    }

    /// Maps a concatenated-text position to `(record index, offset in record)`.
    pub fn resolve(&self, position: usize) -> (usize, usize) {
        let idx = self.records.partition_point(|r| r.start <= position).saturating_sub(1);
        (idx, position - self.records[idx].start)
    }

    /// Rebuilds the text from the BWT.
    pub fn text(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.text_len];
        let mut row = 0; // the row of the sentinel suffix, whose predecessor is the last symbol
        for i in (0..self.text_len).rev() {
            out[i] = self.fwd.symbols[row];
            row = self.lf(row);
        }
        out
    }
}

fn c_table_of(text: &[u8], codes: usize) -> Vec<usize> {
    let mut counts = vec![0usize; codes];
    for &c in text {
        counts[c as usize] += 1;
    }
    let mut table = Vec::with_capacity(codes + 1);
    let mut sum = 1; // the sentinel
    for c in counts {
        table.push(sum);
        sum += c;
    }
    table.push(sum);
    table
}
