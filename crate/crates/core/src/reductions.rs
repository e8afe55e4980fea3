//! Gadget builders that turn dominating-set, set-cover and partial
//! dominating-set instances into bribery instances.
//!
//! All produced instances use two candidates `0` and `1`, every voter ranks
//! `(0, 1)` and the preferred candidate is `1`, so a voter supports it iff
//! it is bribed or has an in-neighbor whose propagated shift is at least 1.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::election::{
    majority_quota, CostFamily, CostFunction, InfluenceArc, InfluenceNetwork, Instance, PreferenceProfile, Rule,
    ShiftVector, Weight,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceProblem {
    DominatingSet,
    DominatingSetComplete,
    SetCover,
    SetCoverDirected,
    PartialDominatingSet,
}

impl SourceProblem {
    pub fn tag(self) -> &'static str {
        match self {
            SourceProblem::DominatingSet => "ds",
            SourceProblem::DominatingSetComplete => "ds-complete",
            SourceProblem::SetCover => "setcover",
            SourceProblem::SetCoverDirected => "setcover-directed",
            SourceProblem::PartialDominatingSet => "ktds",
        }
    }
}

impl fmt::Display for SourceProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A produced instance together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionRecord {
    pub source: SourceProblem,
    pub params: BTreeMap<String, Value>,
    pub instance: Instance,
    /// Supporters the preferred candidate needs in the produced instance.
    pub supporter_target: usize,
    forward: Forward,
}

#[derive(Debug, Clone, PartialEq)]
enum Forward {
    /// Source vertex `v` is voter `v`.
    Identity,
    /// Set `j` is voter `offset + j`; covers are padded to `k` sets.
    Sets { offset: usize, num_sets: usize, k: usize },
}

impl ReductionRecord {
    /// Maps a source certificate (vertex set or chosen set indices) to a
    /// shift vector of the produced instance.
    pub fn forward(&self, solution: &[usize]) -> Result<ShiftVector> {
        let n = self.instance.num_voters();
        match self.forward {
            Forward::Identity => {
                if let Some(&v) = solution.iter().find(|&&v| v >= n) {
                    return Err(Error::Reduction(format!("vertex {v} is out of range")));
                }
                Ok(ShiftVector::from_bribed(n, solution.iter().copied()))
            }
            Forward::Sets { offset, num_sets, k } => {
                if let Some(&j) = solution.iter().find(|&&j| j >= num_sets) {
                    return Err(Error::Reduction(format!("set {j} is out of range")));
                }
                let mut chosen = vec![false; num_sets];
                for &j in solution {
                    chosen[j] = true;
                }
                // Every bribed set vertex is a supporter of its own, so a
                // cover with fewer than k sets is topped up to exactly k.
                let mut count = chosen.iter().filter(|&&c| c).count();
                for c in chosen.iter_mut() {
                    if count >= k {
                        break;
                    }
                    if !*c {
                        *c = true;
                        count += 1;
                    }
                }
                Ok(ShiftVector::from_bribed(n, (0..num_sets).filter(|&j| chosen[j]).map(|j| offset + j)))
            }
        }
    }
}

fn two_candidate(network: InfluenceNetwork, costs: CostFamily, budget: u64) -> Instance {
    let n = network.num_voters();
    Instance::new(
        2,
        1,
        PreferenceProfile::new(vec![vec![0, 1]; n]),
        network,
        costs,
        budget,
        Rule::Majority,
    )
    .expect("gadget instances are valid")
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::Reduction(format!("k = {k} exceeds the number of vertices {n}")));
    }
    Ok(())
}

/// `G` plus `n - 1` isolated voters, identity costs, budget `k`.
pub fn reduce_ds_to_sbon_general(graph: &Graph, k: usize) -> Result<ReductionRecord> {
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::Reduction("graph has no vertices".into()));
    }
    check_k(k, n)?;
    let mut padded = graph.clone();
    for _ in 1..n {
        padded.add_vertex();
    }
    let network = InfluenceNetwork::from_undirected(&padded, Weight::ONE);
    let total = padded.num_vertices();
    let instance = two_candidate(network, CostFamily::identity(total), k as u64);
    Ok(ReductionRecord {
        source: SourceProblem::DominatingSet,
        params: BTreeMap::from([("n".into(), json!(n)), ("k".into(), json!(k))]),
        supporter_target: majority_quota(total),
        instance,
        forward: Forward::Identity,
    })
}

/// Complete network on `G` plus `n - 1` extra voters: weight 1 on the edges
/// of `G`, `1/(2k)` on every other pair; the extra voters cost `k + 1` per
/// shift.
pub fn reduce_ds_to_sbon_complete(graph: &Graph, k: usize) -> Result<ReductionRecord> {
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::Reduction("graph has no vertices".into()));
    }
    if k == 0 {
        return Err(Error::Reduction("k must be at least 1 (edge weight 1/(2k))".into()));
    }
    check_k(k, n)?;
    let total = 2 * n - 1;
    let light = Weight::new(1, 2 * k as u64)?;
    let mut arcs = Vec::with_capacity(total * (total - 1));
    for u in 0..total {
        for v in 0..total {
            if u == v {
                continue;
            }
            let weight = if u < n && v < n && graph.has_edge(u, v) { Weight::ONE } else { light };
            arcs.push(InfluenceArc { from: u, to: v, weight });
        }
    }
    let costs = (0..total)
        .map(|v| if v < n { CostFunction::Identity } else { CostFunction::Linear(k as u64 + 1) })
        .collect();
    let instance = two_candidate(InfluenceNetwork::new(total, arcs)?, CostFamily::new(costs), k as u64);
    Ok(ReductionRecord {
        source: SourceProblem::DominatingSetComplete,
        params: BTreeMap::from([("n".into(), json!(n)), ("k".into(), json!(k))]),
        supporter_target: majority_quota(total),
        instance,
        forward: Forward::Identity,
    })
}

/// Voter layout of the set-cover gadget with `n` elements and `m` sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetCoverLayout {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl SetCoverLayout {
    pub fn element(&self, e: usize) -> usize {
        e
    }

    pub fn set(&self, j: usize) -> usize {
        self.n + j
    }

    /// First voter of `L_new` (`m - k + 1` voters adjacent to every set).
    pub fn l_new(&self) -> usize {
        self.n + self.m
    }

    /// First voter of `R_new` (`n + k - 1` isolated voters).
    pub fn r_new(&self) -> usize {
        self.l_new() + self.m - self.k + 1
    }

    pub fn total(&self) -> usize {
        2 * (self.n + self.m)
    }
}

/// Bipartite gadget: elements and sets (incidence edges), `m - k + 1` new
/// vertices adjacent to all sets, `n + k - 1` isolated vertices. With
/// `directed`, arcs only run from set vertices to their neighbors.
pub fn reduce_setcover_to_sbon_bipartite(
    universe: usize,
    sets: &[Vec<usize>],
    k: usize,
    directed: bool,
) -> Result<ReductionRecord> {
    let m = sets.len();
    if k == 0 || k > m {
        return Err(Error::Reduction(format!("need 1 <= k <= m, got k = {k}, m = {m}")));
    }
    if let Some(&e) = sets.iter().flatten().find(|&&e| e >= universe) {
        return Err(Error::Reduction(format!("element {e} is outside the universe 0..{universe}")));
    }
    let layout = SetCoverLayout { n: universe, m, k };
    let mut links = Vec::new();
    for (j, set) in sets.iter().enumerate() {
        let mut set = set.clone();
        set.sort_unstable();
        set.dedup();
        for e in set {
            links.push((layout.set(j), layout.element(e)));
        }
        for x in 0..(m - k + 1) {
            links.push((layout.set(j), layout.l_new() + x));
        }
    }
    let total = layout.total();
    let network = if directed {
        let arcs = links
            .iter()
            .map(|&(from, to)| InfluenceArc { from, to, weight: Weight::ONE })
            .collect();
        InfluenceNetwork::new(total, arcs)?
    } else {
        InfluenceNetwork::from_undirected(&Graph::from_edges(total, &links), Weight::ONE)
    };
    let instance = two_candidate(network, CostFamily::identity(total), k as u64);
    Ok(ReductionRecord {
        source: if directed { SourceProblem::SetCoverDirected } else { SourceProblem::SetCover },
        params: BTreeMap::from([
            ("universe".into(), json!(universe)),
            ("sets".into(), json!(sets)),
            ("k".into(), json!(k)),
        ]),
        supporter_target: majority_quota(total),
        instance,
        forward: Forward::Sets {
            offset: layout.n,
            num_sets: m,
            k,
        },
    })
}

/// The network is `G` itself; the preferred candidate needs `t` supporters.
pub fn reduce_ktds_to_sbon(graph: &Graph, k: usize, t: usize) -> Result<ReductionRecord> {
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::Reduction("graph has no vertices".into()));
    }
    if t > n {
        return Err(Error::Reduction(format!("t = {t} exceeds the number of vertices {n}")));
    }
    let network = InfluenceNetwork::from_undirected(graph, Weight::ONE);
    let instance = two_candidate(network, CostFamily::identity(n), k as u64).with_supporter_threshold(Some(t));
    Ok(ReductionRecord {
        source: SourceProblem::PartialDominatingSet,
        params: BTreeMap::from([("k".into(), json!(k)), ("t".into(), json!(t))]),
        supporter_target: t,
        instance,
        forward: Forward::Identity,
    })
}

/// `G` plus `n - 1` isolated vertices; a dominating set of size `k` exists
/// iff the padded graph has a `(k, n)`-dominating set.
pub fn pad_ds_to_ktds(graph: &Graph, k: usize) -> (Graph, usize, usize) {
    let n = graph.num_vertices();
    let mut padded = graph.clone();
    for _ in 1..n {
        padded.add_vertex();
    }
    (padded, k, n)
}
