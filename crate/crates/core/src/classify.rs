//! Structural recognition of influence networks and solver preconditions.

use std::fmt;

use crate::dp::decomposition::build_tree_decomposition;
use crate::election::{Instance, InfluenceNetwork, WinCondition};
use crate::error::{precondition, Result};
use crate::graph::Graph;

/// Largest heuristic width for which auto-dispatch still picks the
/// treewidth DP.
pub const AUTO_TREEWIDTH_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    CompleteUnit,
    TransitiveTournament,
    Cluster,
    DirectedPath,
    Forest,
    BoundedTreewidth(usize),
    General,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::CompleteUnit => f.write_str("complete-unit"),
            GraphClass::TransitiveTournament => f.write_str("transitive-tournament"),
            GraphClass::Cluster => f.write_str("cluster"),
            GraphClass::DirectedPath => f.write_str("directed-path"),
            GraphClass::Forest => f.write_str("forest"),
            GraphClass::BoundedTreewidth(w) => write!(f, "bounded-treewidth({w})"),
            GraphClass::General => f.write_str("general"),
        }
    }
}

/// Classifies the network, testing classes in a fixed priority order.
pub fn detect_class(instance: &Instance) -> GraphClass {
    let net = instance.network();
    if is_complete(net) && net.all_unit_weights() {
        return GraphClass::CompleteUnit;
    }
    if transitive_order(net).is_some() {
        return GraphClass::TransitiveTournament;
    }
    let symmetric = net.is_symmetric();
    let support = net.support_graph();
    if symmetric && net.all_unit_weights() && support.is_cluster_graph() {
        return GraphClass::Cluster;
    }
    if is_directed_path(net) {
        return GraphClass::DirectedPath;
    }
    if symmetric && support.is_forest() {
        return GraphClass::Forest;
    }
    if symmetric {
        let width = build_tree_decomposition(&support).width();
        if width <= AUTO_TREEWIDTH_LIMIT {
            return GraphClass::BoundedTreewidth(width);
        }
    }
    GraphClass::General
}

/// Every ordered pair of distinct voters is joined by an arc.
pub fn is_complete(net: &InfluenceNetwork) -> bool {
    let n = net.num_voters();
    net.arcs().len() == n * (n - 1)
}

/// Arcs are exactly `(i + 1) -> i` for `i = 0..n-1`, all of weight 1.
pub fn is_directed_path(net: &InfluenceNetwork) -> bool {
    let n = net.num_voters();
    net.arcs().len() == n - 1
        && net
            .arcs()
            .iter()
            .all(|a| a.from == a.to + 1 && a.weight.is_one())
}

/// For a transitive tournament, the voters by decreasing out-degree.
pub fn transitive_order(net: &InfluenceNetwork) -> Option<Vec<usize>> {
    let n = net.num_voters();
    if net.arcs().len() != n * (n - 1) / 2 {
        return None;
    }
    let deg = net.out_degrees();
    let mut order = vec![usize::MAX; n];
    for (v, &d) in deg.iter().enumerate() {
        let slot = n - 1 - d.min(n - 1);
        if order[slot] != usize::MAX {
            return None;
        }
        order[slot] = v;
    }
    for a in 0..n {
        for b in a + 1..n {
            net.weight(order[a], order[b])?;
        }
    }
    Some(order)
}

/// Undirected support of a symmetric network, or a precondition error.
pub(crate) fn undirected_support(instance: &Instance, algorithm: &'static str) -> Result<Graph> {
    let net = instance.network();
    if !net.is_symmetric() {
        return Err(precondition(algorithm, "network must be undirected (symmetric arcs)"));
    }
    Ok(net.support_graph())
}

pub(crate) fn require_unit_weights(instance: &Instance, algorithm: &'static str) -> Result<()> {
    if instance.network().all_unit_weights() {
        Ok(())
    } else {
        Err(precondition(algorithm, "all arc weights must be 1"))
    }
}

pub(crate) fn require_two_candidates(instance: &Instance, algorithm: &'static str) -> Result<()> {
    if instance.num_candidates() == 2 {
        Ok(())
    } else {
        Err(precondition(
            algorithm,
            format!("needs exactly 2 candidates, found {}", instance.num_candidates()),
        ))
    }
}

/// Supporter target for rules that count first places (majority or an
/// explicit threshold).
pub(crate) fn supporter_target(instance: &Instance, algorithm: &'static str) -> Result<usize> {
    match instance.win_condition() {
        WinCondition::Supporters(t) => Ok(t),
        WinCondition::Plurality => Err(precondition(algorithm, "needs the majority rule")),
    }
}

/// Linear coefficients `b_i` of every voter's cost function.
pub(crate) fn linear_coefficients(instance: &Instance, algorithm: &'static str) -> Result<Vec<u64>> {
    instance
        .costs()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            f.linear_coefficient()
                .ok_or_else(|| precondition(algorithm, format!("cost function of voter {i} is not linear")))
        })
        .collect()
}

pub(crate) fn require_unit_costs(instance: &Instance, algorithm: &'static str) -> Result<()> {
    match instance.costs().iter().position(|f| f.cost(1) != 1) {
        None => Ok(()),
        Some(i) => Err(precondition(algorithm, format!("voter {i} does not have unit bribery cost"))),
    }
}
