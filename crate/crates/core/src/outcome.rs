use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::election::ShiftVector;
use crate::error::Error;

/// Solver identifiers, as used on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Oracle,
    CompleteMajority,
    CompletePlurality,
    Tournament,
    Cluster,
    Path,
    Treewidth,
    Fvs,
    Cvd,
    PartialDom,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::Oracle,
        Algorithm::CompleteMajority,
        Algorithm::CompletePlurality,
        Algorithm::Tournament,
        Algorithm::Cluster,
        Algorithm::Path,
        Algorithm::Treewidth,
        Algorithm::Fvs,
        Algorithm::Cvd,
        Algorithm::PartialDom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::CompleteMajority => "complete-majority",
            Algorithm::CompletePlurality => "complete-plurality",
            Algorithm::Tournament => "tournament",
            Algorithm::Cluster => "cluster",
            Algorithm::Path => "path",
            Algorithm::Treewidth => "treewidth",
            Algorithm::Fvs => "fvs",
            Algorithm::Cvd => "cvd",
            Algorithm::PartialDom => "partial-dom",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm `{s}`")))
    }
}

/// Work counters reported by every solver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// DP cells, enumerated vectors, or search nodes, depending on the solver.
    pub states: u64,
    /// Outer branches (deletion-set subsets, partial-domination nodes).
    pub branches: u64,
    pub width: Option<usize>,
    pub kappa: Option<usize>,
    pub deletion_set: Option<usize>,
    pub micros: u128,
}

impl SolveStats {
    /// Compact `key=value` rendering of the structural parameters.
    pub fn param(&self) -> String {
        let mut parts = Vec::new();
        if let Some(w) = self.width {
            parts.push(format!("w={w}"));
        }
        if let Some(k) = self.deletion_set {
            parts.push(format!("k={k}"));
        }
        if let Some(k) = self.kappa {
            parts.push(format!("kappa={k}"));
        }
        parts.join(";")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub feasible: bool,
    pub optimal_cost: Option<u64>,
    pub witness: Option<ShiftVector>,
    pub algorithm: Algorithm,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn feasible(algorithm: Algorithm, cost: u64, witness: ShiftVector, stats: SolveStats) -> Self {
        SolveOutcome {
            feasible: true,
            optimal_cost: Some(cost),
            witness: Some(witness),
            algorithm,
            stats,
        }
    }

    pub fn infeasible(algorithm: Algorithm, stats: SolveStats) -> Self {
        SolveOutcome {
            feasible: false,
            optimal_cost: None,
            witness: None,
            algorithm,
            stats,
        }
    }

    /// `(feasible, optimal cost)`, the pair every solver must agree on.
    pub fn verdict(&self) -> (bool, Option<u64>) {
        (self.feasible, self.optimal_cost)
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.stats.micros = start.elapsed().as_micros();
        self
    }
}
