//! Knapsack over the cliques of a cluster graph.
//!
//! Bribing any member of a clique convinces the whole clique, so each
//! clique is an item with weight `c(C)` (its cheapest member) and value
//! `gain(C)` (members not yet supporting the preferred candidate).

use std::time::Instant;

use crate::classify::{require_two_candidates, require_unit_weights, supporter_target, undirected_support};
use crate::election::{Instance, ShiftVector};
use crate::error::{precondition, Result};
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSummary {
    pub id: usize,
    /// Cheapest unit bribe among all members, supporters included.
    pub cost: u64,
    /// Members that do not top the preferred candidate yet.
    pub gain: usize,
}

/// Result of [`knapsack_over_cliques`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackSolution {
    /// Smallest budget `d` with `DP[r][d] >= need`, if any.
    pub min_cost: Option<u64>,
    /// Indices (into the summary slice) of the cliques bought at `min_cost`.
    pub chosen: Vec<usize>,
    /// `DP[r][d]` for `d = 0..=clamped budget`.
    pub best_gain: Vec<usize>,
    pub cells: u64,
}

/// `DP[i][d]` = largest total gain from the first `i` cliques with total
/// cost at most `d`. The budget axis stops at `min(budget, sum of costs)`.
pub fn knapsack_over_cliques(cliques: &[CliqueSummary], budget: u64, need: usize) -> KnapsackSolution {
    let total: u64 = cliques.iter().map(|c| c.cost).fold(0, u64::saturating_add);
    let cap = budget.min(total) as usize;
    let width = cap + 1;
    let mut row = vec![0usize; width];
    // take[i * width + d]: clique i improves DP at budget d.
    let mut take = vec![false; cliques.len() * width];
    for (i, c) in cliques.iter().enumerate() {
        let w = c.cost as usize;
        if c.cost > cap as u64 {
            continue;
        }
        for d in (w..width).rev() {
            let with = row[d - w] + c.gain;
            // Branch-free so the running time does not depend on the data.
            take[i * width + d] = with > row[d];
            row[d] = row[d].max(with);
        }
    }
    let min_cost = row.iter().position(|&g| g >= need);
    let mut chosen = Vec::new();
    if let Some(mut d) = min_cost {
        for i in (0..cliques.len()).rev() {
            if take[i * width + d] {
                chosen.push(i);
                d -= cliques[i].cost as usize;
            }
        }
        chosen.reverse();
    }
    KnapsackSolution {
        min_cost: min_cost.map(|d| d as u64),
        chosen,
        best_gain: row,
        cells: (cliques.len() * width) as u64,
    }
}

/// Per clique: its summary and the member to bribe (cheapest, lowest index).
pub fn clique_summaries(instance: &Instance, cliques: &[Vec<usize>]) -> (Vec<CliqueSummary>, Vec<usize>) {
    let mut summaries = Vec::with_capacity(cliques.len());
    let mut pick = Vec::with_capacity(cliques.len());
    for (id, members) in cliques.iter().enumerate() {
        let &best = members
            .iter()
            .min_by_key(|&&v| (instance.costs().get(v).cost(1), v))
            .expect("components are non-empty");
        summaries.push(CliqueSummary {
            id,
            cost: instance.costs().get(best).cost(1),
            gain: members.iter().filter(|&&v| !instance.is_initial_supporter(v)).count(),
        });
        pick.push(best);
    }
    (summaries, pick)
}

/// Cluster graph, two candidates, unit weights, any unit-shift costs.
pub fn solve_cluster_dp(instance: &Instance) -> Result<SolveOutcome> {
    const NAME: &str = "cluster";
    let start = Instant::now();
    let graph = undirected_support(instance, NAME)?;
    if !graph.is_cluster_graph() {
        return Err(precondition(NAME, "network is not a disjoint union of cliques"));
    }
    require_unit_weights(instance, NAME)?;
    require_two_candidates(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    let ell = instance.initial_supporters();
    let need = target.saturating_sub(ell);
    let cliques = graph.components();
    let (summaries, pick) = clique_summaries(instance, &cliques);
    let sol = knapsack_over_cliques(&summaries, instance.budget(), need);
    let stats = SolveStats {
        states: sol.cells,
        kappa: Some(need),
        ..SolveStats::default()
    };
    let outcome = match sol.min_cost {
        Some(cost) => {
            let witness = ShiftVector::from_bribed(instance.num_voters(), sol.chosen.iter().map(|&i| pick[i]));
            SolveOutcome::feasible(Algorithm::Cluster, cost, witness, stats)
        }
        None => SolveOutcome::infeasible(Algorithm::Cluster, stats),
    };
    Ok(outcome.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{CostFamily, InfluenceNetwork, PreferenceProfile, Rule, Weight};
    use crate::graph::Graph;
    use crate::oracle::brute_force_min_cost;

    fn cliques(sizes: &[usize]) -> Graph {
        let mut g = Graph::new(0);
        for &s in sizes {
            let base = g.num_vertices();
            for _ in 0..s {
                g.add_vertex();
            }
            for a in base..base + s {
                for b in a + 1..base + s {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    fn instance(g: &Graph, coefs: &[u64], supporters: &[usize], budget: u64) -> Instance {
        let n = g.num_vertices();
        let rankings = (0..n)
            .map(|i| if supporters.contains(&i) { vec![1, 0] } else { vec![0, 1] })
            .collect();
        Instance::new(
            2,
            1,
            PreferenceProfile::new(rankings),
            InfluenceNetwork::from_undirected(g, Weight::ONE),
            CostFamily::linear(coefs),
            budget,
            Rule::Majority,
        )
        .unwrap()
    }

    #[test]
    fn big_clique_wins_alone() {
        let inst = instance(&cliques(&[3, 2]), &[1; 5], &[], 1);
        let out = solve_cluster_dp(&inst).unwrap();
        assert_eq!(out.verdict(), (true, Some(1)));
        assert_eq!(out.witness, Some(ShiftVector(vec![1, 0, 0, 0, 0])));
        assert_eq!(brute_force_min_cost(&inst).verdict(), out.verdict());
    }

    #[test]
    fn already_won() {
        let inst = instance(&cliques(&[2, 2]), &[1; 4], &[0, 1, 2], 0);
        assert_eq!(solve_cluster_dp(&inst).unwrap().verdict(), (true, Some(0)));
    }

    #[test]
    fn two_pairs_too_expensive() {
        let inst = instance(&cliques(&[2, 2]), &[3; 4], &[], 5);
        assert!(!solve_cluster_dp(&inst).unwrap().feasible);
        assert!(!brute_force_min_cost(&inst).feasible);
        assert_eq!(solve_cluster_dp(&inst.with_budget(6)).unwrap().verdict(), (true, Some(6)));
    }

    #[test]
    fn supporter_can_be_the_cheapest_member() {
        // Clique {0,1,2}: voter 0 supports and is cheapest.
        let inst = instance(&cliques(&[3, 1, 1]), &[1, 5, 5, 1, 1], &[0], 1);
        let out = solve_cluster_dp(&inst).unwrap();
        assert_eq!(out.witness, Some(ShiftVector(vec![1, 0, 0, 0, 0])));
        assert_eq!(brute_force_min_cost(&inst).verdict(), out.verdict());
    }

    #[test]
    fn knapsack_rows_are_monotone() {
        let items: Vec<CliqueSummary> = [(2u64, 3usize), (3, 4), (4, 5), (5, 6)]
            .iter()
            .enumerate()
            .map(|(id, &(cost, gain))| CliqueSummary { id, cost, gain })
            .collect();
        let sol = knapsack_over_cliques(&items, 5, 7);
        assert_eq!(sol.best_gain, vec![0, 0, 3, 4, 5, 7]);
        assert_eq!(sol.min_cost, Some(5));
        assert_eq!(sol.chosen, vec![0, 1]);
        assert!(knapsack_over_cliques(&items, 5, 8).min_cost.is_none());
    }

    #[test]
    fn rejects_non_cluster() {
        let inst = instance(&Graph::path(3), &[1; 3], &[], 1);
        assert!(solve_cluster_dp(&inst).is_err());
    }
}
