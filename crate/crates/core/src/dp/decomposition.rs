//! Tree decompositions: construction by min-fill elimination, validation,
//! and conversion to nice form.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Bags plus the undirected tree edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; nothing else is checked here.
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// Builds a decomposition from `(bag, children)` records, the layout of
    /// the instance file.
    pub fn from_children(nodes: Vec<(Vec<usize>, Vec<usize>)>) -> Self {
        let mut bags = Vec::with_capacity(nodes.len());
        let mut edges = Vec::new();
        for (i, (bag, children)) in nodes.into_iter().enumerate() {
            bags.push(bag);
            edges.extend(children.into_iter().map(|c| (i, c)));
        }
        TreeDecomposition::new(bags, edges)
    }

    /// `(bag, children)` records rooted at node 0.
    pub fn to_children(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let adj = self.adjacency();
        let mut children = vec![Vec::new(); self.bags.len()];
        let mut seen = vec![false; self.bags.len()];
        let mut queue = VecDeque::new();
        for start in 0..self.bags.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        children[u].push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
        self.bags.iter().cloned().zip(children).collect()
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 for decompositions of edgeless graphs).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the tree shape and, per vertex, that its bags are connected.
    fn check_structure(&self) -> Result<()> {
        let k = self.bags.len();
        if k == 0 {
            return Err(Error::InvalidDecomposition("no bags".into()));
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
            return Err(Error::InvalidDecomposition(format!("bad tree edge ({a}, {b})")));
        }
        if self.edges.len() != k - 1 {
            return Err(Error::InvalidDecomposition(format!(
                "{k} bags need {} tree edges, found {}",
                k - 1,
                self.edges.len()
            )));
        }
        let adj = self.adjacency();
        if reachable(&adj, 0, |_| true).iter().filter(|&&r| r).count() != k {
            return Err(Error::InvalidDecomposition("bags do not form a tree".into()));
        }
        let universe: BTreeSet<usize> = self.bags.iter().flatten().copied().collect();
        for v in universe {
            let holds = |t: usize| self.bags[t].binary_search(&v).is_ok();
            let first = (0..k).find(|&t| holds(t)).expect("v occurs somewhere");
            let seen = reachable(&adj, first, holds);
            if (0..k).any(|t| holds(t) && !seen[t]) {
                return Err(Error::InvalidDecomposition(format!(
                    "bags containing vertex {v} are not connected"
                )));
            }
        }
        Ok(())
    }

    /// Full validation against `graph`: tree shape, vertex coverage, edge
    /// coverage and connectivity.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        self.check_structure()?;
        let n = graph.num_vertices();
        let mut covered = vec![false; n];
        for bag in &self.bags {
            for &v in bag {
                if v >= n {
                    return Err(Error::InvalidDecomposition(format!(
                        "bag vertex {v} is not in the graph (n = {n})"
                    )));
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidDecomposition(format!("vertex {v} is in no bag")));
        }
        for (u, v) in graph.edges() {
            let together = self
                .bags
                .iter()
                .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
            if !together {
                return Err(Error::InvalidDecomposition(format!("edge {{{u}, {v}}} is in no bag")));
            }
        }
        Ok(())
    }
}

fn reachable(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] && allowed(w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Width-1 decomposition of a forest (width 0 without edges). Each vertex
/// gets the bag `{v, parent(v)}`; roots get `{v}` and are chained together.
pub fn forest_decomposition(graph: &Graph) -> TreeDecomposition {
    let n = graph.num_vertices();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut bags = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut seen = vec![false; n];
    let mut prev_root: Option<usize> = None;
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        bags[root] = vec![root];
        if let Some(p) = prev_root {
            edges.push((p, root));
        }
        prev_root = Some(root);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    bags[w] = vec![u, w];
                    edges.push((u, w));
                    queue.push_back(w);
                }
            }
        }
    }
    TreeDecomposition::new(bags, edges)
}

/// Forests get [`forest_decomposition`]; everything else is eliminated
/// greedily by minimum fill-in (ties: smaller degree, then smaller index).
pub fn build_tree_decomposition(graph: &Graph) -> TreeDecomposition {
    if graph.is_forest() {
        return forest_decomposition(graph);
    }
    let n = graph.num_vertices();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut step_of = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut later: Vec<Vec<usize>> = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .expect("some vertex is alive");
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        step_of[v] = step;
        let mut bag = nbrs.clone();
        bag.push(v);
        bags.push(bag);
        later.push(nbrs);
    }
    // Node i hangs below the node of its earliest-eliminated later neighbor;
    // nodes without one attach to node i + 1.
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, nbrs) in later.iter().enumerate().take(n.saturating_sub(1)) {
        let parent = nbrs.iter().map(|&u| step_of[u]).min().unwrap_or(i + 1);
        edges.push((i, parent));
    }
    TreeDecomposition::new(bags, edges)
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce { vertex: usize, child: usize },
    Forget { vertex: usize, child: usize },
    Join { left: usize, right: usize },
}

/// Nice decomposition stored as an arena in which children always precede
/// their parents; the root is the last node and has an empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<usize>>,
    width: usize,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn bag(&self, node: usize) -> &[usize] {
        &self.bags[node]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The same bags viewed as a plain decomposition.
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let mut edges = Vec::with_capacity(self.nodes.len().saturating_sub(1));
        for (i, node) in self.nodes.iter().enumerate() {
            match *node {
                NiceNode::Leaf => {}
                NiceNode::Introduce { child, .. } | NiceNode::Forget { child, .. } => edges.push((child, i)),
                NiceNode::Join { left, right } => {
                    edges.push((left, i));
                    edges.push((right, i));
                }
            }
        }
        TreeDecomposition::new(self.bags.clone(), edges)
    }

    pub fn validate(&self, graph: &Graph) -> Result<()> {
        self.check_nice()?;
        self.as_tree_decomposition().validate(graph)
    }

    /// Node-type constraints: leaves are empty, introduce/forget change the
    /// bag by exactly their vertex, join children carry the parent's bag.
    pub fn check_nice(&self) -> Result<()> {
        let bad = |i: usize, what: &str| Err(Error::InvalidDecomposition(format!("nice node {i}: {what}")));
        for (i, node) in self.nodes.iter().enumerate() {
            let bag = &self.bags[i];
            match *node {
                NiceNode::Leaf if !bag.is_empty() => return bad(i, "leaf bag is not empty"),
                NiceNode::Leaf => {}
                NiceNode::Introduce { vertex, child } => {
                    let mut expect = self.bags[child].clone();
                    if child >= i || expect.contains(&vertex) {
                        return bad(i, "malformed introduce");
                    }
                    expect.push(vertex);
                    expect.sort_unstable();
                    if &expect != bag {
                        return bad(i, "introduce bag mismatch");
                    }
                }
                NiceNode::Forget { vertex, child } => {
                    let expect: Vec<usize> = self.bags[child].iter().copied().filter(|&u| u != vertex).collect();
                    if child >= i || expect.len() + 1 != self.bags[child].len() || &expect != bag {
                        return bad(i, "malformed forget");
                    }
                }
                NiceNode::Join { left, right } => {
                    if left >= i || right >= i || &self.bags[left] != bag || &self.bags[right] != bag {
                        return bad(i, "join children must carry the parent bag");
                    }
                }
            }
        }
        if self.bags.last().is_some_and(|b| !b.is_empty()) {
            return bad(self.nodes.len() - 1, "root bag is not empty");
        }
        Ok(())
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<usize>>,
}

impl NiceBuilder {
    fn push(&mut self, node: NiceNode, bag: Vec<usize>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    fn leaf(&mut self) -> usize {
        self.push(NiceNode::Leaf, Vec::new())
    }

    /// Forgets `from \ to`, then introduces `to \ from`, in increasing order.
    fn morph(&mut self, mut node: usize, to: &[usize]) -> usize {
        let from = self.bags[node].clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            let bag: Vec<usize> = self.bags[node].iter().copied().filter(|&u| u != v).collect();
            node = self.push(NiceNode::Forget { vertex: v, child: node }, bag);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let mut bag = self.bags[node].clone();
            let pos = bag.binary_search(&v).unwrap_err();
            bag.insert(pos, v);
            node = self.push(NiceNode::Introduce { vertex: v, child: node }, bag);
        }
        node
    }
}

/// Nicifies a decomposition rooted at its last bag. Fails if the input is
/// not a tree or some vertex's bags are disconnected.
pub fn make_nice(dec: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    dec.check_structure()?;
    let k = dec.num_nodes();
    let adj = dec.adjacency();
    let root = k - 1;
    let mut parent = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut seen = vec![false; k];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut children = vec![Vec::new(); k];
    for &u in &order[1..] {
        children[parent[u]].push(u);
    }
    let mut b = NiceBuilder {
        nodes: Vec::new(),
        bags: Vec::new(),
    };
    let mut top = vec![usize::MAX; k];
    for &t in order.iter().rev() {
        let bag = &dec.bags[t];
        let mut acc: Option<usize> = None;
        for &c in &children[t] {
            let branch = b.morph(top[c], bag);
            acc = Some(match acc {
                None => branch,
                Some(prev) => b.push(NiceNode::Join { left: prev, right: branch }, bag.clone()),
            });
        }
        top[t] = match acc {
            Some(node) => node,
            None => {
                let leaf = b.leaf();
                b.morph(leaf, bag)
            }
        };
    }
    let last = b.morph(top[root], &[]);
    // An empty single bag would leave the leaf as root; that is fine.
    debug_assert_eq!(last, b.nodes.len() - 1);
    Ok(NiceTreeDecomposition {
        nodes: b.nodes,
        bags: b.bags,
        width: dec.width(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_of_small_graphs() {
        let mut tree = Graph::path(4);
        tree.add_vertex();
        tree.add_edge(1, 4);
        let dec = build_tree_decomposition(&tree);
        assert_eq!(dec.width(), 1);
        dec.validate(&tree).unwrap();

        let k4 = Graph::complete(4);
        let dec = build_tree_decomposition(&k4);
        assert_eq!(dec.width(), 3);
        dec.validate(&k4).unwrap();

        let c5 = Graph::cycle(5);
        let dec = build_tree_decomposition(&c5);
        assert_eq!(dec.width(), 2);
        dec.validate(&c5).unwrap();

        let empty = Graph::new(3);
        assert_eq!(build_tree_decomposition(&empty).width(), 0);
    }

    #[test]
    fn single_bag_becomes_a_chain() {
        let dec = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        let nice = make_nice(&dec).unwrap();
        assert_eq!(
            nice.nodes(),
            &[
                NiceNode::Leaf,
                NiceNode::Introduce { vertex: 0, child: 0 },
                NiceNode::Introduce { vertex: 1, child: 1 },
                NiceNode::Forget { vertex: 0, child: 2 },
                NiceNode::Forget { vertex: 1, child: 3 },
            ]
        );
        nice.check_nice().unwrap();
    }

    #[test]
    fn forget_precedes_introduce() {
        let dec = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = make_nice(&dec).unwrap();
        let forget_a = nice
            .nodes()
            .iter()
            .position(|n| matches!(n, NiceNode::Forget { vertex: 0, .. }))
            .unwrap();
        let intro_c = nice
            .nodes()
            .iter()
            .position(|n| matches!(n, NiceNode::Introduce { vertex: 2, .. }))
            .unwrap();
        assert!(forget_a < intro_c);
        nice.validate(&Graph::path(3)).unwrap();
    }

    #[test]
    fn missing_edge_is_named() {
        let mut g = Graph::path(3);
        g.add_edge(0, 2);
        let dec = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let err = dec.validate(&g).unwrap_err();
        assert!(err.to_string().contains("{0, 2}"), "{err}");
    }

    #[test]
    fn disconnected_occurrences_are_rejected() {
        let dec = TreeDecomposition::new(vec![vec![0], vec![1], vec![0]], vec![(0, 1), (1, 2)]);
        assert!(make_nice(&dec).is_err());
        let not_tree = TreeDecomposition::new(vec![vec![0], vec![1]], vec![]);
        assert!(make_nice(&not_tree).is_err());
    }

    #[test]
    fn joins_carry_equal_bags() {
        let star = Graph::star(4);
        let dec = build_tree_decomposition(&star);
        let nice = make_nice(&dec).unwrap();
        nice.validate(&star).unwrap();
        assert!(nice.nodes().iter().any(|n| matches!(n, NiceNode::Join { .. })));
    }

    #[test]
    fn children_records_round_trip() {
        let dec = build_tree_decomposition(&Graph::cycle(6));
        let again = TreeDecomposition::from_children(dec.to_children());
        again.validate(&Graph::cycle(6)).unwrap();
        assert_eq!(again.bags(), dec.bags());
    }
}
