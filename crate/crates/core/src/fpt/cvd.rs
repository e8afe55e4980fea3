//! Branching over a cluster vertex deletion set `X`.
//!
//! For each `Y ⊆ X` the voters in `Y` are bribed and `Y ∪ N(Y)` become
//! supporters. The remaining unconvinced voters `W` of `X \ Y` can only be
//! convinced by bribed clique members, so each clique offers options
//! "bribe a nonempty member set T": gain the whole clique and convince
//! `N(T) ∩ W`. A knapsack over cliques keyed by the convinced part of `W`
//! and the gain then minimises cost.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::classify::{linear_coefficients, require_two_candidates, require_unit_weights, supporter_target, undirected_support};
use crate::election::Instance;
use crate::error::{precondition, Result};
use crate::fpt::deletion::{find_deletion_set, DeletionKind, DeletionSet};
use crate::fpt::fvs::finish;
use crate::graph::Graph;
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

/// Largest deletion set handled (masks over `X \ Y` use 64 bits and the
/// outer loop is exponential anyway).
pub const MAX_CVD: usize = 20;

pub fn solve_via_cvd(instance: &Instance) -> Result<SolveOutcome> {
    let graph = undirected_support(instance, "cvd")?;
    let x = find_deletion_set(&graph, DeletionKind::ClusterVertexDeletion);
    solve_via_cvd_with(instance, &x)
}

#[derive(Debug, Clone)]
struct CliqueOption {
    mask: u64,
    cost: u64,
    gain: usize,
    bribed: Vec<usize>,
}

/// Per nonempty bribed set of clique members, grouped by which `W` voters it
/// convinces; keeps the cheapest set per group.
fn clique_options(members: &[usize], w_mask: &[u64], unit: &[u64], gain: usize) -> Vec<CliqueOption> {
    let mut best: BTreeMap<u64, (u64, Vec<usize>)> = BTreeMap::new();
    for &v in members {
        let mut next = best.clone();
        let mut offer = |mask: u64, cost: u64, set: Vec<usize>| {
            if next.get(&mask).is_none_or(|(c, _)| cost < *c) {
                next.insert(mask, (cost, set));
            }
        };
        offer(w_mask[v], unit[v], vec![v]);
        for (&mask, (cost, set)) in &best {
            let mut set = set.clone();
            set.push(v);
            offer(mask | w_mask[v], cost + unit[v], set);
        }
        best = next;
    }
    let mut out = vec![CliqueOption {
        mask: 0,
        cost: 0,
        gain: 0,
        bribed: Vec::new(),
    }];
    out.extend(best.into_iter().map(|(mask, (cost, bribed))| CliqueOption { mask, cost, gain, bribed }));
    out
}

/// Same, with a caller-supplied cluster vertex deletion set.
pub fn solve_via_cvd_with(instance: &Instance, x: &DeletionSet) -> Result<SolveOutcome> {
    const NAME: &str = "cvd";
    let start = Instant::now();
    let graph = undirected_support(instance, NAME)?;
    require_two_candidates(instance, NAME)?;
    require_unit_weights(instance, NAME)?;
    let unit = linear_coefficients(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    if x.kind() != DeletionKind::ClusterVertexDeletion {
        return Err(precondition(NAME, "needs a cluster vertex deletion set"));
    }
    let x = DeletionSet::new(&graph, DeletionKind::ClusterVertexDeletion, x.vertices().to_vec())?;
    let xs = x.vertices();
    if xs.len() > MAX_CVD {
        return Err(precondition(NAME, format!("deletion set of size {} is too large", xs.len())));
    }
    let n = instance.num_voters();
    let mut in_x = vec![false; n];
    for &v in xs {
        in_x[v] = true;
    }
    let cliques: Vec<Vec<usize>> = graph
        .without_vertices(&in_x)
        .components()
        .into_iter()
        .filter(|c| !in_x[c[0]])
        .collect();

    let mut stats = SolveStats {
        deletion_set: Some(xs.len()),
        ..SolveStats::default()
    };
    let mut best: Option<(u64, Vec<usize>)> = None;
    for subset in 0u64..(1 << xs.len()) {
        stats.branches += 1;
        let y: Vec<usize> = (0..xs.len()).filter(|&i| subset >> i & 1 == 1).map(|i| xs[i]).collect();
        let paid: u64 = y.iter().map(|&v| unit[v]).sum();
        if paid > instance.budget() || best.as_ref().is_some_and(|(c, _)| paid >= *c) {
            continue;
        }
        let mut supporter: Vec<bool> = (0..n).map(|v| instance.is_initial_supporter(v)).collect();
        for &v in &y {
            supporter[v] = true;
            for &u in graph.neighbors(v) {
                supporter[u] = true;
            }
        }
        let ell = supporter.iter().filter(|&&s| s).count();
        let left = instance.budget() - paid;
        let Some((cost, bribed, cells)) = branch(&graph, &cliques, &in_x, &supporter, &unit, left, target.saturating_sub(ell))
        else {
            continue;
        };
        stats.states += cells;
        let total = paid + cost;
        if best.as_ref().is_none_or(|(c, _)| total < *c) {
            let mut all = y.clone();
            all.extend(bribed);
            best = Some((total, all));
        }
    }
    finish(instance, Algorithm::Cvd, best, stats, start)
}

/// `(convinced W mask, gain) -> (cost, previous key, option index)`.
type Layer = BTreeMap<(u64, usize), (u64, (u64, usize), usize)>;

/// Cheapest clique bribery convincing `need` more voters within `budget`.
fn branch(
    graph: &Graph,
    cliques: &[Vec<usize>],
    in_x: &[bool],
    supporter: &[bool],
    unit: &[u64],
    budget: u64,
    need: usize,
) -> Option<(u64, Vec<usize>, u64)> {
    let n = graph.num_vertices();
    let w: Vec<usize> = (0..n).filter(|&v| in_x[v] && !supporter[v]).collect();
    let mut w_mask = vec![0u64; n];
    for (bit, &x) in w.iter().enumerate() {
        for &u in graph.neighbors(x) {
            w_mask[u] |= 1 << bit;
        }
    }
    let mut layers: Vec<Layer> = Vec::with_capacity(cliques.len() + 1);
    layers.push(BTreeMap::from([((0, 0), (0, (0, 0), 0))]));
    let mut options = Vec::with_capacity(cliques.len());
    let mut cells = 1u64;
    for members in cliques {
        let gain = members.iter().filter(|&&v| !supporter[v]).count();
        let opts = clique_options(members, &w_mask, unit, gain);
        let mut next = Layer::new();
        for (&(mask, g), &(cost, _, _)) in layers.last().expect("at least one layer") {
            for (k, o) in opts.iter().enumerate() {
                let c = cost + o.cost;
                if c > budget {
                    continue;
                }
                let key = (mask | o.mask, g + o.gain);
                if next.get(&key).is_none_or(|&(old, _, _)| c < old) {
                    next.insert(key, (c, (mask, g), k));
                }
            }
        }
        cells += next.len() as u64;
        layers.push(next);
        options.push(opts);
    }
    let (&key, &(cost, _, _)) = layers
        .last()
        .expect("at least one layer")
        .iter()
        .filter(|(&(mask, g), _)| g + mask.count_ones() as usize >= need)
        .min_by_key(|(&key, &(cost, _, _))| (cost, key))?;
    let mut bribed = Vec::new();
    let mut cur = key;
    for i in (0..cliques.len()).rev() {
        let (_, prev, k) = layers[i + 1][&cur];
        bribed.extend_from_slice(&options[i][k].bribed);
        cur = prev;
    }
    bribed.sort_unstable();
    Some((cost, bribed, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::cluster::solve_cluster_dp;
    use crate::election::{CostFamily, InfluenceNetwork, PreferenceProfile, Rule, Weight};
    use crate::oracle::brute_force_min_cost;

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

    fn two_triangles_and_hub() -> Graph {
        let mut g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        g.add_edge(6, 0);
        g.add_edge(6, 3);
        g
    }

    #[test]
    fn cluster_input_matches_cluster_dp() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]);
        let inst = instance(&g, &[1; 5], &[], 1);
        let a = solve_via_cvd(&inst).unwrap();
        assert_eq!(a.verdict(), solve_cluster_dp(&inst).unwrap().verdict());
        assert_eq!(a.stats.branches, 1);
    }

    #[test]
    fn hub_between_triangles() {
        let g = two_triangles_and_hub();
        for budget in 0..=3 {
            let inst = instance(&g, &[1; 7], &[], budget);
            let out = solve_via_cvd(&inst).unwrap();
            assert_eq!(out.verdict(), brute_force_min_cost(&inst).verdict(), "b={budget}");
        }
    }

    #[test]
    fn zero_budget_without_majority() {
        let inst = instance(&two_triangles_and_hub(), &[1; 7], &[0], 0);
        assert!(!solve_via_cvd(&inst).unwrap().feasible);
    }

    #[test]
    fn clique_bribe_convinces_the_hub() {
        // Hub 6 is expensive; bribing vertex 0 convinces its triangle and
        // the hub, 4 of 7.
        let inst = instance(&two_triangles_and_hub(), &[1, 1, 1, 1, 1, 1, 9], &[], 1);
        let out = solve_via_cvd(&inst).unwrap();
        assert_eq!(out.verdict(), (true, Some(1)));
        assert_eq!(out.verdict(), brute_force_min_cost(&inst).verdict());
    }

    #[test]
    fn options_keep_cheapest_per_mask() {
        let w_mask = [0b01, 0b10, 0b01];
        let opts = clique_options(&[0, 1, 2], &w_mask, &[3, 1, 2], 3);
        let by_mask: Vec<(u64, u64)> = opts.iter().map(|o| (o.mask, o.cost)).collect();
        assert_eq!(by_mask, vec![(0, 0), (0b01, 2), (0b10, 1), (0b11, 3)]);
    }
}
