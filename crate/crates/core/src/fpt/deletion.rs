//! Minimum feedback-vertex and cluster-vertex-deletion sets by bounded
//! branching with iterative deepening. Desk-scale graphs only.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeletionKind {
    FeedbackVertexSet,
    ClusterVertexDeletion,
}

impl fmt::Display for DeletionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeletionKind::FeedbackVertexSet => "feedback-vertex-set",
            DeletionKind::ClusterVertexDeletion => "cluster-vertex-deletion",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionSet {
    kind: DeletionKind,
    vertices: Vec<usize>,
}

impl DeletionSet {
    /// Checks that removing `vertices` leaves a forest or a cluster graph.
    pub fn new(graph: &Graph, kind: DeletionKind, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= graph.num_vertices()) {
            return Err(Error::InvalidDeletionSet(format!("vertex {v} is not in the graph")));
        }
        let removed = mask(graph.num_vertices(), &vertices);
        if obstruction(graph, kind, &removed).is_some() {
            return Err(Error::InvalidDeletionSet(format!("removing {vertices:?} does not leave a {}", target_name(kind))));
        }
        Ok(DeletionSet { kind, vertices })
    }

    pub fn kind(&self) -> DeletionKind {
        self.kind
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn target_name(kind: DeletionKind) -> &'static str {
    match kind {
        DeletionKind::FeedbackVertexSet => "forest",
        DeletionKind::ClusterVertexDeletion => "cluster graph",
    }
}

fn mask(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut removed = vec![false; n];
    for &v in vertices {
        removed[v] = true;
    }
    removed
}

/// A small vertex set one of whose members must be deleted.
fn obstruction(graph: &Graph, kind: DeletionKind, removed: &[bool]) -> Option<Vec<usize>> {
    match kind {
        DeletionKind::FeedbackVertexSet => graph.find_cycle(removed),
        DeletionKind::ClusterVertexDeletion => graph.find_induced_p3(removed).map(|p| p.to_vec()),
    }
}

fn branch(graph: &Graph, kind: DeletionKind, removed: &mut Vec<bool>, chosen: &mut Vec<usize>, budget: usize) -> bool {
    let Some(obs) = obstruction(graph, kind, removed) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for v in obs {
        removed[v] = true;
        chosen.push(v);
        if branch(graph, kind, removed, chosen, budget - 1) {
            return true;
        }
        chosen.pop();
        removed[v] = false;
    }
    false
}

/// A minimum deletion set of the requested kind.
pub fn find_deletion_set(graph: &Graph, kind: DeletionKind) -> DeletionSet {
    let n = graph.num_vertices();
    for k in 0..=n {
        let mut removed = vec![false; n];
        let mut chosen = Vec::new();
        if branch(graph, kind, &mut removed, &mut chosen, k) {
            return DeletionSet::new(graph, kind, chosen).expect("branching returns a valid set");
        }
    }
    unreachable!("deleting every vertex always works")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forest_needs_nothing() {
        assert!(find_deletion_set(&Graph::star(5), DeletionKind::FeedbackVertexSet).is_empty());
    }

    #[test]
    fn c4_needs_one() {
        assert_eq!(find_deletion_set(&Graph::cycle(4), DeletionKind::FeedbackVertexSet).len(), 1);
    }

    #[test]
    fn paw_cvd_is_the_hub() {
        let mut paw = Graph::complete(3);
        paw.add_vertex();
        paw.add_edge(0, 3);
        let x = find_deletion_set(&paw, DeletionKind::ClusterVertexDeletion);
        assert_eq!(x.vertices(), &[0]);
    }

    #[test]
    fn k4_fvs_is_two() {
        assert_eq!(find_deletion_set(&Graph::complete(4), DeletionKind::FeedbackVertexSet).len(), 2);
        assert!(find_deletion_set(&Graph::complete(4), DeletionKind::ClusterVertexDeletion).is_empty());
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(DeletionSet::new(&Graph::cycle(5), DeletionKind::FeedbackVertexSet, vec![]).is_err());
        assert!(DeletionSet::new(&Graph::path(4), DeletionKind::ClusterVertexDeletion, vec![0]).is_err());
        assert!(DeletionSet::new(&Graph::path(3), DeletionKind::ClusterVertexDeletion, vec![1]).is_ok());
        assert!(DeletionSet::new(&Graph::path(3), DeletionKind::ClusterVertexDeletion, vec![7]).is_err());
    }
}
