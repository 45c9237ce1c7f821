//! Approximate string matching with search schemes over a bidirectional
//! FM-index.
//!
//! - [`scheme`]: searches `(pi, L, U)`, validation, mismatch patterns, coverage.
//! - [`trie`]: exact edge counts of a scheme's search tries.
//! - [`optimizer`]: branch-and-bound search for optimal schemes and a MIP
//!   model exporter.
//! - [`index`]: bidirectional FM-index with a sampled suffix array.
//! - [`search`]: scheme-driven Hamming and edit distance search.
//! - [`seqio`]: FASTA / FASTQ input.
//! - [`cli`]: the `search-schemes` command line.

pub mod cli;
pub mod index;
pub mod optimizer;
pub mod partition;
pub mod scheme;
pub mod search;
pub mod seqio;
pub mod trie;

pub use partition::Partition;
pub use scheme::{MismatchPattern, Search, SearchScheme};
