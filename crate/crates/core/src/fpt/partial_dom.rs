//! Affected-voters search: the smallest `D` whose closed neighborhood
//! covers at least `p` voters that do not support the preferred candidate
//! yet, found by branch and bound over vertex subsets.

use std::time::Instant;

use crate::classify::{require_two_candidates, require_unit_costs, require_unit_weights, supporter_target, undirected_support};
use crate::election::{Instance, ShiftVector};
use crate::error::Result;
use crate::graph::Graph;
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

struct Search<'a> {
    graph: &'a Graph,
    counts: &'a [bool],
    covered: Vec<u32>,
    chosen: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn gain(&self, v: usize) -> usize {
        std::iter::once(v)
            .chain(self.graph.neighbors(v).iter().copied())
            .filter(|&u| self.counts[u] && self.covered[u] == 0)
            .count()
    }

    fn toggle(&mut self, v: usize, add: bool) {
        for u in std::iter::once(v).chain(self.graph.neighbors(v).iter().copied()) {
            if add {
                self.covered[u] += 1;
            } else {
                self.covered[u] -= 1;
            }
        }
    }

    /// Extends `chosen` by `left` vertices from `from..` to cover `need` more.
    fn dfs(&mut self, from: usize, left: usize, need: usize) -> bool {
        self.nodes += 1;
        if need == 0 {
            return true;
        }
        if left == 0 {
            return false;
        }
        let n = self.graph.num_vertices();
        let mut gains: Vec<usize> = (from..n).map(|v| self.gain(v)).collect();
        gains.sort_unstable_by(|a, b| b.cmp(a));
        if gains.iter().take(left).sum::<usize>() < need {
            return false;
        }
        for v in from..n {
            let g = self.gain(v);
            if g == 0 {
                continue;
            }
            self.toggle(v, true);
            self.chosen.push(v);
            if self.dfs(v + 1, left - 1, need.saturating_sub(g)) {
                return true;
            }
            self.chosen.pop();
            self.toggle(v, false);
        }
        false
    }
}

/// Smallest `D` with `|D| <= k_max` covering `need` voters flagged in
/// `counts`, trying sizes in increasing order. Returns the set and the
/// number of search nodes.
pub fn min_partial_cover(graph: &Graph, counts: &[bool], need: usize, k_max: usize) -> (Option<Vec<usize>>, u64) {
    let mut search = Search {
        graph,
        counts,
        covered: vec![0; graph.num_vertices()],
        chosen: Vec::new(),
        nodes: 0,
    };
    for k in 0..=k_max.min(graph.num_vertices()) {
        if search.dfs(0, k, need) {
            return (Some(search.chosen), search.nodes);
        }
    }
    (None, search.nodes)
}

/// Two candidates, unit costs and weights, undirected network. `k_max`
/// bounds the size of the searched sets; feasibility also needs `k <= b`.
pub fn solve_via_partial_domination(instance: &Instance, k_max: usize) -> Result<SolveOutcome> {
    const NAME: &str = "partial-dom";
    let start = Instant::now();
    let graph = undirected_support(instance, NAME)?;
    require_two_candidates(instance, NAME)?;
    require_unit_costs(instance, NAME)?;
    require_unit_weights(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    let n = instance.num_voters();
    let counts: Vec<bool> = (0..n).map(|v| !instance.is_initial_supporter(v)).collect();
    let p = target.saturating_sub(instance.initial_supporters());
    let (found, nodes) = min_partial_cover(&graph, &counts, p, k_max);
    let stats = SolveStats {
        states: nodes,
        kappa: Some(p),
        ..SolveStats::default()
    };
    let outcome = match found {
        Some(d) if d.len() as u64 <= instance.budget() => {
            SolveOutcome::feasible(Algorithm::PartialDom, d.len() as u64, ShiftVector::from_bribed(n, d), stats)
        }
        _ => SolveOutcome::infeasible(Algorithm::PartialDom, stats),
    };
    Ok(outcome.timed(start))
}

/// The default search bound: sets larger than the budget or than `p` are
/// never needed.
pub fn default_k_max(instance: &Instance) -> usize {
    let p = instance
        .required_supporters()
        .unwrap_or(0)
        .saturating_sub(instance.initial_supporters());
    (instance.budget().min(p as u64)) as usize
}
