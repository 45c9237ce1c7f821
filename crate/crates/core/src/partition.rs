//! Splitting a read into pieces.
//!
//! Reads whose length is not a multiple of the piece count are split into
//! pieces whose lengths differ by at most one, with the longer pieces placed
//! first (lowest piece indices). This is the convention under which the
//! published R=101 edge counts are reproduced exactly.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("a partition needs at least one piece")]
    NoPieces,
    #[error("read of length {read_len} cannot be split into {pieces} non-empty pieces")]
    TooShort { read_len: usize, pieces: usize },
    #[error("piece {piece} has length 0")]
    EmptyPiece { piece: usize },
}

/// Lengths of the pieces of a read, indexed by piece (piece 1 is `lengths()[0]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    lengths: Vec<usize>,
}

impl Partition {
    /// Near-equal split, longer pieces first.
    pub fn even(read_len: usize, pieces: usize) -> Result<Self, PartitionError> {
        if pieces == 0 {
            return Err(PartitionError::NoPieces);
        }
        if read_len < pieces {
            return Err(PartitionError::TooShort { read_len, pieces });
        }
        let base = read_len / pieces;
        let extra = read_len % pieces;
        let lengths = (0..pieces).map(|j| if j < extra { base + 1 } else { base }).collect();
        Ok(Partition { lengths })
    }

    pub fn from_lengths(lengths: Vec<usize>) -> Result<Self, PartitionError> {
        if lengths.is_empty() {
            return Err(PartitionError::NoPieces);
        }
        if let Some(j) = lengths.iter().position(|&m| m == 0) {
            return Err(PartitionError::EmptyPiece { piece: j + 1 });
        }
        Ok(Partition { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn num_pieces(&self) -> usize {
        self.lengths.len()
    }

    pub fn read_len(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Length of 1-based piece `piece`.
    pub fn len_of(&self, piece: usize) -> usize {
        self.lengths[piece - 1]
    }

    /// Offset of the first read position of 1-based piece `piece`.
    pub fn start_of(&self, piece: usize) -> usize {
        self.lengths[..piece - 1].iter().sum()
    }

    /// True when mirroring the piece order leaves the lengths unchanged.
    pub fn is_symmetric(&self) -> bool {
        self.lengths.iter().eq(self.lengths.iter().rev())
    }
}
