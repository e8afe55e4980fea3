//! Branching over a feedback vertex set `X`.
//!
//! For each `Y ⊆ X` the voters in `Y` are bribed and `Y ∪ N(Y)` become
//! supporters. The rest of `X` may not be bribed but can still be convinced
//! by a bribed forest neighbor, so those vertices stay in the residual DP:
//! they are added to every bag of a forest decomposition of `G - X` (in which
//! every vertex of `X` is isolated and has its own bag).

use std::time::Instant;

use crate::classify::{require_two_candidates, require_unit_costs, require_unit_weights, supporter_target, undirected_support};
use crate::dp::decomposition::{forest_decomposition, make_nice, TreeDecomposition};
use crate::dp::treewidth::{run_influence_dp, InfluenceProblem, MAX_BAG};
use crate::election::{Instance, ShiftVector};
use crate::error::{precondition, Error, Result};
use crate::fpt::deletion::{find_deletion_set, DeletionKind, DeletionSet};
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

pub fn solve_via_fvs(instance: &Instance) -> Result<SolveOutcome> {
    let graph = undirected_support(instance, "fvs")?;
    let x = find_deletion_set(&graph, DeletionKind::FeedbackVertexSet);
    solve_via_fvs_with(instance, &x)
}

/// Same, with a caller-supplied feedback vertex set.
pub fn solve_via_fvs_with(instance: &Instance, x: &DeletionSet) -> Result<SolveOutcome> {
    const NAME: &str = "fvs";
    let start = Instant::now();
    let graph = undirected_support(instance, NAME)?;
    require_two_candidates(instance, NAME)?;
    require_unit_costs(instance, NAME)?;
    require_unit_weights(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    if x.kind() != DeletionKind::FeedbackVertexSet {
        return Err(precondition(NAME, "needs a feedback vertex set"));
    }
    let x = DeletionSet::new(&graph, DeletionKind::FeedbackVertexSet, x.vertices().to_vec())?;
    let xs = x.vertices();
    if xs.len() + 2 > MAX_BAG || xs.len() >= 63 {
        return Err(precondition(NAME, format!("feedback vertex set of size {} is too large", xs.len())));
    }
    let n = instance.num_voters();
    let mut in_x = vec![false; n];
    for &v in xs {
        in_x[v] = true;
    }
    let forest = forest_decomposition(&graph.without_vertices(&in_x));

    let mut stats = SolveStats {
        deletion_set: Some(xs.len()),
        ..SolveStats::default()
    };
    let mut best: Option<(u64, Vec<usize>)> = None;
    for subset in 0u64..(1 << xs.len()) {
        stats.branches += 1;
        let y: Vec<usize> = (0..xs.len()).filter(|&i| subset >> i & 1 == 1).map(|i| xs[i]).collect();
        let paid = y.len() as u64;
        if paid > instance.budget() || best.as_ref().is_some_and(|(c, _)| paid >= *c) {
            continue;
        }
        let mut supporter: Vec<bool> = (0..n).map(|v| instance.is_initial_supporter(v)).collect();
        let mut in_y = vec![false; n];
        for &v in &y {
            in_y[v] = true;
            supporter[v] = true;
            for &u in graph.neighbors(v) {
                supporter[u] = true;
            }
        }
        let ell = supporter.iter().filter(|&&s| s).count();
        let kappa = target.saturating_sub(ell);
        let left = instance.budget() - paid;
        let cap = left.min(kappa as u64) as usize;
        let bribable: Vec<bool> = (0..n).map(|v| !in_x[v]).collect();
        let residual = graph.without_vertices(&in_y);
        let rest: Vec<usize> = xs.iter().copied().filter(|&v| !in_y[v]).collect();
        let dec = augment(&forest, &rest);
        let nice = make_nice(&dec)?;
        let problem = InfluenceProblem {
            graph: &residual,
            supporter: &supporter,
            bribable: &bribable,
        };
        let run = run_influence_dp(&problem, &nice, cap)?;
        stats.states += run.states;
        stats.width = stats.width.max(Some(dec.width()));
        let Some(extra) = run.min_bribes(kappa) else {
            continue;
        };
        let cost = paid + extra as u64;
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            let mut bribed = y.clone();
            bribed.extend(run.bribed(extra, n));
            best = Some((cost, bribed));
        }
    }
    finish(instance, Algorithm::Fvs, best, stats, start)
}

/// Adds `everywhere` to every bag.
fn augment(dec: &TreeDecomposition, everywhere: &[usize]) -> TreeDecomposition {
    let bags = dec
        .bags()
        .iter()
        .map(|b| b.iter().chain(everywhere).copied().collect())
        .collect();
    TreeDecomposition::new(bags, dec.edges().to_vec())
}

/// Final verification on the original instance and outcome assembly.
pub(crate) fn finish(
    instance: &Instance,
    algorithm: Algorithm,
    best: Option<(u64, Vec<usize>)>,
    stats: SolveStats,
    start: Instant,
) -> Result<SolveOutcome> {
    let outcome = match best {
        Some((cost, bribed)) => {
            let witness = ShiftVector::from_bribed(instance.num_voters(), bribed);
            if !instance.verify(&witness) || instance.shift_cost(&witness)? != cost {
                return Err(Error::Internal(format!("{algorithm}: combined witness {witness} fails verification")));
            }
            SolveOutcome::feasible(algorithm, cost, witness, stats)
        }
        None => SolveOutcome::infeasible(algorithm, stats),
    };
    Ok(outcome.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::treewidth::solve_treewidth;
    use crate::graph::Graph;
    use crate::election::{CostFamily, InfluenceNetwork, PreferenceProfile, Rule, Weight};
    use crate::oracle::brute_force_min_cost;

    fn instance(g: &Graph, supporters: &[usize], budget: u64) -> Instance {
        let n = g.num_vertices();
        let rankings = (0..n)
            .map(|i| if supporters.contains(&i) { vec![1, 0] } else { vec![0, 1] })
            .collect();
        Instance::new(
            2,
            1,
            PreferenceProfile::new(rankings),
            InfluenceNetwork::from_undirected(g, Weight::ONE),
            CostFamily::identity(n),
            budget,
            Rule::Majority,
        )
        .unwrap()
    }

    #[test]
    fn forest_matches_treewidth() {
        let inst = instance(&Graph::star(5), &[], 1);
        let a = solve_via_fvs(&inst).unwrap();
        let b = solve_treewidth(&inst, None).unwrap();
        assert_eq!(a.verdict(), b.verdict());
        assert_eq!(a.stats.branches, 1);
    }

    #[test]
    fn c4_one_bribe() {
        let inst = instance(&Graph::cycle(4), &[], 1);
        let out = solve_via_fvs(&inst).unwrap();
        assert_eq!(out.verdict(), (true, Some(1)));
        assert_eq!(out.stats.branches, 2);
    }

    #[test]
    fn c5_with_pendants() {
        let mut g = Graph::cycle(5);
        for v in 0..5 {
            let p = g.add_vertex();
            g.add_edge(v, p);
        }
        for budget in 0..=4 {
            let inst = instance(&g, &[], budget);
            assert_eq!(solve_via_fvs(&inst).unwrap().verdict(), brute_force_min_cost(&inst).verdict(), "b={budget}");
        }
    }

    #[test]
    fn unbribable_rest_of_x_is_still_counted() {
        // In K4 the set X has two vertices; a bribed forest vertex must still
        // convince both.
        let inst = instance(&Graph::complete(4), &[], 1);
        let out = solve_via_fvs(&inst).unwrap();
        assert_eq!(out.verdict(), (true, Some(1)));
        assert_eq!(out.stats.branches, 4);
    }
}
