//! Solver dispatch by name or by detected network class.

use crate::classify::{detect_class, GraphClass};
use crate::dp::cluster::solve_cluster_dp;
use crate::dp::decomposition::TreeDecomposition;
use crate::dp::path::solve_path_dp;
use crate::dp::treewidth::solve_treewidth;
use crate::election::{Instance, WinCondition};
use crate::error::{precondition, Error, Result};
use crate::fpt::cvd::solve_via_cvd;
use crate::fpt::fvs::solve_via_fvs;
use crate::fpt::partial_dom::{default_k_max, solve_via_partial_domination};
use crate::oracle::brute_force_min_cost;
use crate::outcome::{Algorithm, SolveOutcome};
use crate::poly::{solve_complete_majority, solve_complete_plurality, solve_transitive_tournament};

/// Default cap on `n * (m - 1)` for the oracle.
pub const DEFAULT_ORACLE_GUARD: u64 = 24;

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Decomposition for the treewidth DP; built heuristically if absent.
    pub decomposition: Option<TreeDecomposition>,
    /// Overrides [`DEFAULT_ORACLE_GUARD`].
    pub oracle_guard: Option<u64>,
    /// Largest set size tried by the affected-voters search.
    pub k_max: Option<usize>,
}

impl SolveOptions {
    fn guard(&self) -> u64 {
        self.oracle_guard.unwrap_or(DEFAULT_ORACLE_GUARD)
    }
}

/// Enumeration size measure checked by the oracle guard.
pub fn oracle_bits(instance: &Instance) -> u64 {
    instance.num_voters() as u64 * instance.max_shift() as u64
}

pub fn solve(instance: &Instance, algorithm: Algorithm, options: &SolveOptions) -> Result<SolveOutcome> {
    match algorithm {
        Algorithm::Oracle => {
            let bits = oracle_bits(instance);
            if bits > options.guard() {
                return Err(precondition(
                    "oracle",
                    format!("n*(m-1) = {bits} exceeds the size guard {}", options.guard()),
                ));
            }
            Ok(brute_force_min_cost(instance))
        }
        Algorithm::CompleteMajority => solve_complete_majority(instance),
        Algorithm::CompletePlurality => solve_complete_plurality(instance),
        Algorithm::Tournament => solve_transitive_tournament(instance),
        Algorithm::Cluster => solve_cluster_dp(instance),
        Algorithm::Path => solve_path_dp(instance),
        Algorithm::Treewidth => solve_treewidth(instance, options.decomposition.as_ref()),
        Algorithm::Fvs => solve_via_fvs(instance),
        Algorithm::Cvd => solve_via_cvd(instance),
        Algorithm::PartialDom => {
            let k_max = options.k_max.unwrap_or_else(|| default_k_max(instance));
            solve_via_partial_domination(instance, k_max)
        }
    }
}

/// The specialised solver for a detected class.
pub fn algorithm_for(instance: &Instance, class: GraphClass) -> Algorithm {
    match class {
        GraphClass::CompleteUnit if instance.win_condition() == WinCondition::Plurality => Algorithm::CompletePlurality,
        GraphClass::CompleteUnit => Algorithm::CompleteMajority,
        GraphClass::TransitiveTournament => Algorithm::Tournament,
        GraphClass::Cluster => Algorithm::Cluster,
        GraphClass::DirectedPath => Algorithm::Path,
        GraphClass::Forest | GraphClass::BoundedTreewidth(_) => Algorithm::Treewidth,
        GraphClass::General => Algorithm::Oracle,
    }
}

/// Detects the class and runs its solver. A failed precondition falls back
/// to the oracle when the instance is within the size guard.
pub fn solve_auto(instance: &Instance, options: &SolveOptions) -> Result<SolveOutcome> {
    let algorithm = algorithm_for(instance, detect_class(instance));
    match solve(instance, algorithm, options) {
        Err(Error::Precondition { .. }) if algorithm != Algorithm::Oracle && oracle_bits(instance) <= options.guard() => {
            solve(instance, Algorithm::Oracle, options)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{CostFamily, InfluenceNetwork, PreferenceProfile, Rule, Weight};
    use crate::graph::Graph;

    fn inst(g: &Graph, m: usize, budget: u64) -> Instance {
        let n = g.num_vertices();
        Instance::new(
            m,
            m - 1,
            PreferenceProfile::new(vec![(0..m).collect(); n]),
            InfluenceNetwork::from_undirected(g, Weight::ONE),
            CostFamily::identity(n),
            budget,
            Rule::Majority,
        )
        .unwrap()
    }

    #[test]
    fn auto_picks_the_class_solver() {
        let out = solve_auto(&inst(&Graph::cycle(6), 2, 2), &SolveOptions::default()).unwrap();
        assert_eq!(out.algorithm, Algorithm::Treewidth);
        let out = solve_auto(&inst(&Graph::complete(4), 2, 1), &SolveOptions::default()).unwrap();
        assert_eq!(out.algorithm, Algorithm::CompleteMajority);
    }

    #[test]
    fn auto_falls_back_to_the_oracle() {
        // Three candidates rule out the treewidth DP.
        let out = solve_auto(&inst(&Graph::cycle(5), 3, 2), &SolveOptions::default()).unwrap();
        assert_eq!(out.algorithm, Algorithm::Oracle);
    }

    #[test]
    fn oracle_guard() {
        let big = inst(&Graph::path(30), 2, 1);
        assert!(solve(&big, Algorithm::Oracle, &SolveOptions::default()).is_err());
        let opts = SolveOptions {
            oracle_guard: Some(10),
            ..SolveOptions::default()
        };
        assert!(solve(&inst(&Graph::cycle(11), 3, 1), Algorithm::Oracle, &opts).is_err());
    }

    #[test]
    fn explicit_algorithm_reports_precondition() {
        let err = solve(&inst(&Graph::path(3), 2, 1), Algorithm::Cluster, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition { algorithm: "cluster", .. }));
    }
}
