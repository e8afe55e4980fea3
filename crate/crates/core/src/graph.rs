//! Simple undirected graphs over `0..n`.
//!
//! Used for the support graph of symmetric influence networks and as the
//! source side of the reductions.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Self-loops and duplicate edges are
    /// dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    /// Star with `leaves` leaves; vertex 0 is the center.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.adj.len() && v < self.adj.len(), "edge endpoint out of range");
        if u == v {
            return;
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Closed neighborhood N[v], sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    /// Copy of the graph with every edge touching a `removed` vertex dropped.
    /// Vertex ids are unchanged.
    pub fn without_vertices(&self, removed: &[bool]) -> Graph {
        let mut g = Graph::new(self.num_vertices());
        for (u, v) in self.edges() {
            if !removed[u] && !removed[v] {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() <= 1 || self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.num_edges() + self.components().len() == self.num_vertices()
    }

    /// True iff every connected component is a clique.
    pub fn is_cluster_graph(&self) -> bool {
        self.components()
            .iter()
            .all(|comp| comp.iter().all(|&v| self.degree(v) == comp.len() - 1))
    }

    /// An induced path `u - v - w` (with `u`, `w` non-adjacent), if any.
    pub fn find_induced_p3(&self, removed: &[bool]) -> Option<[usize; 3]> {
        for v in 0..self.num_vertices() {
            if removed[v] {
                continue;
            }
            let nbrs: Vec<usize> = self.adj[v].iter().copied().filter(|&u| !removed[u]).collect();
            for (i, &u) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if !self.has_edge(u, w) {
                        return Some([u, v, w]);
                    }
                }
            }
        }
        None
    }

    /// The vertex set of some cycle in the graph minus `removed`, if any.
    /// Among the cycles closed first by a BFS from each root, the shortest wins.
    pub fn find_cycle(&self, removed: &[bool]) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        let mut best: Option<Vec<usize>> = None;
        // BFS from every root; the first non-tree edge closes a short cycle.
        for root in 0..n {
            if removed[root] {
                continue;
            }
            let mut parent = vec![usize::MAX; n];
            let mut depth = vec![usize::MAX; n];
            depth[root] = 0;
            let mut queue = VecDeque::from([root]);
            'bfs: while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if removed[w] || w == parent[u] {
                        continue;
                    }
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else {
                        let cycle = tree_cycle(&parent, &depth, u, w);
                        if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                            best = Some(cycle);
                        }
                        break 'bfs;
                    }
                }
            }
            if best.as_ref().is_some_and(|b| b.len() == 3) {
                break;
            }
        }
        best
    }
}

fn tree_cycle(parent: &[usize], depth: &[usize], mut a: usize, mut b: usize) -> Vec<usize> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[a] > depth[b] {
        left.push(a);
        a = parent[a];
    }
    while depth[b] > depth[a] {
        right.push(b);
        b = parent[b];
    }
    while a != b {
        left.push(a);
        right.push(b);
        a = parent[a];
        b = parent[b];
    }
    left.push(a);
    left.extend(right.into_iter().rev());
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_shapes() {
        assert_eq!(Graph::complete(4).num_edges(), 6);
        assert_eq!(Graph::cycle(5).num_edges(), 5);
        assert!(Graph::path(6).is_forest());
        assert!(!Graph::cycle(4).is_forest());
        assert_eq!(Graph::star(3).degree(0), 3);
    }

    #[test]
    fn cluster_detection() {
        let mut g = Graph::complete(3);
        let a = g.add_vertex();
        let b = g.add_vertex();
        g.add_edge(a, b);
        assert!(g.is_cluster_graph());
        g.add_edge(0, a);
        assert!(!g.is_cluster_graph());
        assert!(g.find_induced_p3(&[false; 5]).is_some());
    }

    #[test]
    fn cycles_are_found() {
        let none = vec![false; 7];
        assert!(Graph::path(7).find_cycle(&none).is_none());
        let c = Graph::cycle(7).find_cycle(&none).unwrap();
        assert_eq!(c.len(), 7);
        let mut g = Graph::cycle(6);
        g.add_edge(0, 2);
        assert_eq!(g.find_cycle(&[false; 6]).unwrap().len(), 3);
        let mut removed = vec![false; 6];
        removed[0] = true;
        assert!(g.find_cycle(&removed).is_none());
    }
}
