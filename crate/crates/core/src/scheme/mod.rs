//! Search schemes: searches `(pi, L, U)` over a partitioned read, their
//! structural rules, mismatch patterns and coverage.
//!
//! A search visits the pieces of a read in the order `pi` (1-based piece
//! indices). After iteration `i` the cumulative number of errors must lie in
//! `[lower[i], upper[i]]`. Because the index can only grow the matched string
//! at its two ends, the pieces visited so far must always form a contiguous
//! block of the read.

mod fixtures;
mod json;
mod pattern;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub use fixtures::{builtin, builtin_names, builtins_for, bundled_optimal, BUILTIN_SCHEMES};
pub use json::{parse_scheme, serialize_scheme, SchemeParseError};
pub use pattern::{
    covers, enumerate_mismatch_patterns, is_feasible, pattern_count, FeasibilityReport, MismatchPattern,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("search has pi/L/U of lengths {pi}/{lower}/{upper}, expected {expected}")]
    LengthMismatch {
        pi: usize,
        lower: usize,
        upper: usize,
        expected: usize,
    },
    #[error("search {index} is invalid: {violations}")]
    InvalidSearch { index: usize, violations: String },
    #[error("scheme has {found} pieces but {expected} were expected")]
    PieceCount { found: usize, expected: usize },
    #[error("malformed compact search `{0}`")]
    Compact(String),
}

/// One search of a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Search {
    pub pi: Vec<usize>,
    pub lower: Vec<u32>,
    pub upper: Vec<u32>,
}

impl Search {
    pub fn new(pi: Vec<usize>, lower: Vec<u32>, upper: Vec<u32>) -> Self {
        Search { pi, lower, upper }
    }

    /// Parses the compact digit notation `"231,011,012"` (single digits only).
    pub fn compact(text: &str) -> Result<Self, SchemeError> {
        let err = || SchemeError::Compact(text.to_string());
        let parts: Vec<&str> = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(str::trim)
            .collect();
        if parts.len() != 3 {
            return Err(err());
        }
        let digits =
            |s: &str| -> Result<Vec<u32>, SchemeError> { s.chars().map(|c| c.to_digit(10).ok_or_else(err)).collect() };
        let pi = digits(parts[0])?.into_iter().map(|d| d as usize).collect();
        Ok(Search::new(pi, digits(parts[1])?, digits(parts[2])?))
    }

    /// The full-backtracking search: pieces left to right, `L = 0`, `U = K`.
    pub fn backtracking(pieces: usize, max_errors: u32) -> Self {
        Search::new((1..=pieces).collect(), vec![0; pieces], vec![max_errors; pieces])
    }

    pub fn num_pieces(&self) -> usize {
        self.pi.len()
    }

    /// A search is empty when some lower bound exceeds its upper bound.
    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| l > u)
    }

    /// The same search on the mirrored read (piece `j` becomes `P + 1 - j`).
    pub fn mirrored(&self) -> Search {
        let p = self.pi.len();
        Search {
            pi: self.pi.iter().map(|&j| p + 1 - j).collect(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
        }
    }

    /// Canonical ordering key: first-iteration piece, then `pi`, `L`, `U`.
    pub fn canonical_cmp(&self, other: &Search) -> Ordering {
        self.pi
            .first()
            .cmp(&other.pi.first())
            .then_with(|| self.pi.cmp(&other.pi))
            .then_with(|| self.lower.cmp(&other.lower))
            .then_with(|| self.upper.cmp(&other.upper))
    }
}

impl fmt::Display for Search {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let small = self.pi.iter().all(|&j| j < 10) && self.lower.iter().chain(&self.upper).all(|&b| b < 10);
        let join = |v: Vec<String>| if small { v.concat() } else { v.join(" ") };
        write!(
            f,
            "({},{},{})",
            join(self.pi.iter().map(ToString::to_string).collect()),
            join(self.lower.iter().map(ToString::to_string).collect()),
            join(self.upper.iter().map(ToString::to_string).collect()),
        )
    }
}

/// A rule broken by a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotAPermutation,
    /// The piece at this (1-based) iteration is not adjacent to the block searched so far.
    ConnectivityBroken {
        iteration: usize,
        piece: usize,
    },
    LowerNotMonotone {
        iteration: usize,
    },
    UpperNotMonotone {
        iteration: usize,
    },
    /// `L > U` at this iteration. A warning: empty searches are representable.
    EmptySearch {
        iteration: usize,
    },
    /// `U` exceeds the scheme's maximum error count. A warning: the bound is capped.
    UpperAboveMax {
        iteration: usize,
    },
}

impl Violation {
    pub fn is_warning(&self) -> bool {
        matches!(self, Violation::EmptySearch { .. } | Violation::UpperAboveMax { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAPermutation => write!(f, "not-a-permutation"),
            Violation::ConnectivityBroken { iteration, piece } => {
                write!(f, "connectivity-broken (piece {piece} at iteration {iteration})")
            }
            Violation::LowerNotMonotone { iteration } => {
                write!(f, "bounds-not-monotone (L decreases at iteration {iteration})")
            }
            Violation::UpperNotMonotone { iteration } => {
                write!(f, "bounds-not-monotone (U decreases at iteration {iteration})")
            }
            Violation::EmptySearch { iteration } => {
                write!(f, "empty-search (L > U at iteration {iteration})")
            }
            Violation::UpperAboveMax { iteration } => {
                write!(f, "upper bound above K at iteration {iteration}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// No errors; warnings allowed.
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !v.is_warning())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.is_warning())
    }

    pub fn has(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks a search against the structural rules for `num_pieces` pieces.
pub fn validate_search(search: &Search, num_pieces: usize, max_errors: u32) -> Result<ValidationReport, SchemeError> {
    let (p, l, u) = (search.pi.len(), search.lower.len(), search.upper.len());
    if p != num_pieces || l != num_pieces || u != num_pieces {
        return Err(SchemeError::LengthMismatch {
            pi: p,
            lower: l,
            upper: u,
            expected: num_pieces,
        });
    }
    let mut violations = Vec::new();

    let mut seen = vec![false; num_pieces + 1];
    let is_perm = search.pi.iter().all(|&j| {
        let fresh = (1..=num_pieces).contains(&j) && !seen[j];
        if fresh {
            seen[j] = true;
        }
        fresh
    });
    if !is_perm {
        violations.push(Violation::NotAPermutation);
    } else if let Some(first) = search.pi.first() {
        let (mut lo, mut hi) = (*first, *first);
        for (i, &j) in search.pi.iter().enumerate().skip(1) {
            if j + 1 == lo {
                lo = j;
            } else if j == hi + 1 {
                hi = j;
            } else {
                violations.push(Violation::ConnectivityBroken {
                    iteration: i + 1,
                    piece: j,
                });
                break;
            }
        }
    }

    for i in 1..num_pieces {
        if search.lower[i] < search.lower[i - 1] {
            violations.push(Violation::LowerNotMonotone { iteration: i + 1 });
        }
        if search.upper[i] < search.upper[i - 1] {
            violations.push(Violation::UpperNotMonotone { iteration: i + 1 });
        }
    }
    if let Some(i) = (0..num_pieces).find(|&i| search.lower[i] > search.upper[i]) {
        violations.push(Violation::EmptySearch { iteration: i + 1 });
    }
    if let Some(i) = (0..num_pieces).find(|&i| search.upper[i] > max_errors) {
        violations.push(Violation::UpperAboveMax { iteration: i + 1 });
    }
    Ok(ValidationReport { violations })
}

/// A set of searches over `num_pieces` pieces tolerating up to `max_errors` errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchScheme {
    pub max_errors: u32,
    pub num_pieces: usize,
    /// Read length the scheme was stated for, if any.
    pub read_len: Option<usize>,
    pub searches: Vec<Search>,
}

impl SearchScheme {
    /// Builds a scheme, rejecting searches that break a structural rule.
    pub fn new(max_errors: u32, num_pieces: usize, searches: Vec<Search>) -> Result<Self, SchemeError> {
        for (index, s) in searches.iter().enumerate() {
            let report = validate_search(s, num_pieces, max_errors)?;
            if !report.is_ok() {
                let violations: Vec<String> = report.errors().map(ToString::to_string).collect();
                return Err(SchemeError::InvalidSearch {
                    index,
                    violations: violations.join("; "),
                });
            }
        }
        Ok(SearchScheme {
            max_errors,
            num_pieces,
            read_len: None,
            searches,
        })
    }

    /// Builds a scheme from compact search strings such as `"231,011,012"`.
    pub fn from_compact(max_errors: u32, num_pieces: usize, searches: &[&str]) -> Result<Self, SchemeError> {
        let searches = searches
            .iter()
            .map(|s| Search::compact(s))
            .collect::<Result<Vec<_>, _>>()?;
        SearchScheme::new(max_errors, num_pieces, searches)
    }

    /// The single-search backtracking scheme.
    pub fn backtracking(max_errors: u32, num_pieces: usize) -> Self {
        SearchScheme {
            max_errors,
            num_pieces,
            read_len: None,
            searches: vec![Search::backtracking(num_pieces, max_errors)],
        }
    }

    pub fn with_read_len(mut self, read_len: usize) -> Self {
        self.read_len = Some(read_len);
        self
    }

    /// Drops searches with `L > U` somewhere; they enumerate nothing.
    pub fn strip_empty_searches(&self) -> SearchScheme {
        SearchScheme {
            searches: self.searches.iter().filter(|s| !s.is_empty()).cloned().collect(),
            ..self.clone()
        }
    }

    /// Searches sorted into canonical order.
    pub fn canonicalized(&self) -> SearchScheme {
        let mut searches = self.searches.clone();
        searches.sort_by(Search::canonical_cmp);
        SearchScheme {
            searches,
            ..self.clone()
        }
    }

    /// The scheme on the mirrored read.
    pub fn mirrored(&self) -> SearchScheme {
        SearchScheme {
            searches: self.searches.iter().map(Search::mirrored).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for SearchScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.searches.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Lexicographic comparison of two schemes' canonical search lists.
pub fn canonical_scheme_cmp(a: &[Search], b: &[Search]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.canonical_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}
