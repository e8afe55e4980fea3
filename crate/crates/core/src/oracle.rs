//! Brute-force reference solvers.
//!
//! Nothing here is clever on purpose: the specialised solvers and the
//! reduction builders are all checked against these functions.

use std::time::Instant;

use crate::election::{Instance, ShiftVector};
use crate::graph::Graph;
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

/// Limits of the exhaustive search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationBounds {
    /// Largest total cost explored. Defaults to the instance budget.
    pub max_total_cost: Option<u64>,
    /// Largest direct shift per voter. Defaults to `m - 1`.
    pub max_shift: Option<usize>,
}

/// Minimum-cost winning shift vector by depth-first enumeration with cost
/// pruning. Among optimal vectors the lexicographically smallest is returned.
pub fn brute_force_min_cost(instance: &Instance) -> SolveOutcome {
    brute_force_min_cost_with(instance, EnumerationBounds::default())
}

pub fn brute_force_min_cost_with(instance: &Instance, bounds: EnumerationBounds) -> SolveOutcome {
    let start = Instant::now();
    let max_cost = bounds.max_total_cost.unwrap_or(instance.budget());
    let max_shift = bounds
        .max_shift
        .unwrap_or(instance.max_shift())
        .min(instance.max_shift());
    let mut search = Search {
        instance,
        max_cost,
        max_shift,
        current: vec![0; instance.num_voters()],
        best: None,
        leaves: 0,
    };
    search.descend(0, 0);
    let stats = SolveStats {
        states: search.leaves,
        ..SolveStats::default()
    };
    match search.best {
        Some((cost, witness)) => SolveOutcome::feasible(Algorithm::Oracle, cost, ShiftVector(witness), stats),
        None => SolveOutcome::infeasible(Algorithm::Oracle, stats),
    }
    .timed(start)
}

struct Search<'a> {
    instance: &'a Instance,
    max_cost: u64,
    max_shift: usize,
    current: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
    leaves: u64,
}

impl Search<'_> {
    fn descend(&mut self, voter: usize, cost: u64) {
        if voter == self.current.len() {
            self.leaves += 1;
            let s = ShiftVector(self.current.clone());
            let profile = self.instance.apply_shift(&s).expect("enumerated vectors are in range");
            if self.instance.preferred_wins(&profile) {
                self.best = Some((cost, s.0));
            }
            return;
        }
        let f = self.instance.costs().get(voter).clone();
        for shift in 0..=self.max_shift {
            let total = cost.saturating_add(f.cost(shift));
            if total > self.max_cost {
                continue;
            }
            // Later leaves are lexicographically larger, so ties lose.
            if matches!(self.best, Some((b, _)) if total >= b) {
                continue;
            }
            self.current[voter] = shift;
            self.descend(voter + 1, total);
        }
        self.current[voter] = 0;
    }
}

/// Number of vertices in `N[D]`.
pub fn dominated_count(graph: &Graph, set: &[usize]) -> usize {
    let mut hit = vec![false; graph.num_vertices()];
    for &v in set {
        hit[v] = true;
        for &u in graph.neighbors(v) {
            hit[u] = true;
        }
    }
    hit.into_iter().filter(|&h| h).count()
}

/// Smallest set `D` with `|D| <= k` and `|N[D]| >= t`, trying sizes in
/// increasing order and subsets lexicographically.
pub fn brute_force_partial_dominating(graph: &Graph, k: usize, t: usize) -> Option<Vec<usize>> {
    let n = graph.num_vertices();
    (0..=k.min(n)).find_map(|size| {
        Combinations::new(n, size).find(|set| dominated_count(graph, set) >= t)
    })
}

/// A dominating set of size at most `k`, if one exists.
pub fn brute_force_dominating(graph: &Graph, k: usize) -> Option<Vec<usize>> {
    brute_force_partial_dominating(graph, k, graph.num_vertices())
}

/// Size of a minimum dominating set.
pub fn domination_number(graph: &Graph) -> usize {
    (0..=graph.num_vertices())
        .find(|&k| brute_force_dominating(graph, k).is_some())
        .unwrap_or(0)
}

/// `r`-subsets of `0..n` in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, r: usize) -> Self {
        Combinations {
            n,
            current: (0..r).collect(),
            done: r > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let r = self.current.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - r + i {
                self.current[i] += 1;
                for j in i + 1..r {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{CostFamily, InfluenceNetwork, PreferenceProfile, Rule, Weight};

    fn binary(tops: &[bool], network: InfluenceNetwork, budget: u64) -> Instance {
        let n = tops.len();
        let rankings = tops.iter().map(|&t| if t { vec![1, 0] } else { vec![0, 1] }).collect();
        Instance::new(
            2,
            1,
            PreferenceProfile::new(rankings),
            network,
            CostFamily::identity(n),
            budget,
            Rule::Majority,
        )
        .unwrap()
    }

    fn directed_path(n: usize) -> InfluenceNetwork {
        let arcs = (0..n - 1)
            .map(|i| crate::election::InfluenceArc {
                from: i + 1,
                to: i,
                weight: Weight::ONE,
            })
            .collect();
        InfluenceNetwork::new(n, arcs).unwrap()
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn already_winning_costs_nothing() {
        let out = brute_force_min_cost(&binary(&[true], InfluenceNetwork::empty(1), 0));
        assert_eq!(out.verdict(), (true, Some(0)));
        assert_eq!(out.witness, Some(ShiftVector(vec![0])));
    }

    #[test]
    fn isolated_voters_need_two_flips() {
        let out = brute_force_min_cost(&binary(&[false; 3], InfluenceNetwork::empty(3), 1));
        assert!(!out.feasible);
        let out = brute_force_min_cost(&binary(&[false; 3], InfluenceNetwork::empty(3), 2));
        assert_eq!(out.verdict(), (true, Some(2)));
        assert_eq!(out.witness, Some(ShiftVector(vec![0, 1, 1])));
    }

    #[test]
    fn directed_path_of_three() {
        let out = brute_force_min_cost(&binary(&[false; 3], directed_path(3), 1));
        assert_eq!(out.verdict(), (true, Some(1)));
        // (0,0,1) convinces voters 2 and 1 and is the first winner found.
        assert_eq!(out.witness, Some(ShiftVector(vec![0, 0, 1])));
    }

    #[test]
    fn partial_domination_examples() {
        assert_eq!(brute_force_partial_dominating(&Graph::star(3), 1, 4), Some(vec![0]));
        assert_eq!(brute_force_partial_dominating(&Graph::new(4), 1, 2), None);
        let p5 = brute_force_partial_dominating(&Graph::path(5), 1, 3).unwrap();
        assert!(matches!(p5.as_slice(), [1] | [2] | [3]));
        assert_eq!(brute_force_partial_dominating(&Graph::new(3), 0, 0), Some(vec![]));
    }

    #[test]
    fn domination_examples() {
        assert_eq!(brute_force_dominating(&Graph::complete(4), 1).map(|d| d.len()), Some(1));
        assert!(brute_force_dominating(&Graph::cycle(6), 2).is_some());
        assert!(brute_force_dominating(&Graph::cycle(7), 2).is_none());
        assert_eq!(domination_number(&Graph::cycle(7)), 3);
    }
}
