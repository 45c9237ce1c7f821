//! Optimal search schemes.
//!
//! [`solve_exact`] is a branch-and-bound over sets of candidate searches and
//! is the ground truth at desk scale. [`build_mip`] writes the full integer
//! program for external solvers, and [`export_lp`] renders it as an LP file.

mod exact;
mod lp;
mod mip;

use std::fmt;
use std::time::Duration;

use num_bigint::BigUint;
use thiserror::Error;

use crate::partition::{Partition, PartitionError};
use crate::scheme::SearchScheme;

pub use exact::{solve_exact, Incumbent};
pub use lp::{parse_lp, LpParseError, LpSummary};
pub use mip::{build_mip, export_lp, MipModel, MipOptions, Row, Sense, VarKind, Variable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptimizeError {
    #[error("invalid problem: {0}")]
    Spec(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("model too large: {what} = {count} exceeds the budget of {budget}")]
    TooLarge {
        what: &'static str,
        count: u128,
        budget: u128,
    },
    #[error("the integer program assumes equal pieces; R = {read_len} is not a multiple of P = {pieces}")]
    UnequalPieces { read_len: usize, pieces: usize },
}

/// Parameters of an optimal-scheme problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    pub max_errors: u32,
    pub read_len: usize,
    pub pieces: usize,
    pub max_searches: usize,
    pub sigma: u32,
}

impl ProblemSpec {
    pub fn new(
        max_errors: u32,
        read_len: usize,
        pieces: usize,
        max_searches: usize,
        sigma: u32,
    ) -> Result<Self, OptimizeError> {
        let spec = ProblemSpec {
            max_errors,
            read_len,
            pieces,
            max_searches,
            sigma,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        if self.pieces == 0 {
            return Err(OptimizeError::Spec("P must be at least 1".into()));
        }
        if self.max_searches == 0 {
            return Err(OptimizeError::Spec("the number of searches must be at least 1".into()));
        }
        if self.read_len < self.pieces {
            return Err(OptimizeError::Spec(format!(
                "R = {} is smaller than P = {}",
                self.read_len, self.pieces
            )));
        }
        if self.sigma < 2 {
            return Err(OptimizeError::Spec(format!(
                "alphabet size must be at least 2, got {}",
                self.sigma
            )));
        }
        if self.max_errors > 9 || self.pieces > 9 {
            return Err(OptimizeError::Spec("K and P above 9 are not supported".into()));
        }
        Ok(())
    }

    pub fn partition(&self) -> Result<Partition, OptimizeError> {
        Ok(Partition::even(self.read_len, self.pieces)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofStatus {
    /// The search space was exhausted; the scheme is optimal.
    Optimal,
    /// A feasible scheme from heuristics only; no search was attempted.
    FeasibleOnly,
    /// The space was exhausted without a feasible scheme.
    Infeasible,
    /// A limit was hit; the scheme (if any) is the best found.
    BudgetExhausted,
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofStatus::Optimal => "optimal",
            ProofStatus::FeasibleOnly => "feasible-only",
            ProofStatus::Infeasible => "infeasible",
            ProofStatus::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// Limits and switches for [`solve_exact`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Drop candidates whose coverage is matched by a cheaper one.
    pub dominance: bool,
    /// Explore only one of each mirror-image pair of schemes (symmetric partitions only).
    pub mirror_symmetry: bool,
    /// Start from the bundled optimal scheme for the same `K` and `P`, if any.
    pub warm_start: bool,
    /// Stop after the greedy start.
    pub heuristic_only: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit: None,
            node_limit: None,
            dominance: true,
            mirror_symmetry: true,
            warm_start: true,
            heuristic_only: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub candidates: usize,
    /// Candidates left after dominance filtering.
    pub kept: usize,
    pub nodes: u64,
    pub elapsed: Duration,
    /// Improving solutions in the order found.
    pub history: Vec<Incumbent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizationResult {
    pub scheme: Option<SearchScheme>,
    pub objective: Option<BigUint>,
    pub status: ProofStatus,
    pub stats: SolveStats,
}
