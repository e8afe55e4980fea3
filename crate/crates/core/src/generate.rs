//! Seeded random instances per network class. Same config and seed give the
//! same instance on every platform (ChaCha8).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{
    CostFamily, CostFunction, InfluenceArc, InfluenceNetwork, Instance, PreferenceProfile, Rule, Weight,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceClass {
    Complete,
    Tournament,
    Cluster,
    Path,
    Forest,
    Treewidth,
    Fvs,
    Cvd,
    General,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 9] = [
        InstanceClass::Complete,
        InstanceClass::Tournament,
        InstanceClass::Cluster,
        InstanceClass::Path,
        InstanceClass::Forest,
        InstanceClass::Treewidth,
        InstanceClass::Fvs,
        InstanceClass::Cvd,
        InstanceClass::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceClass::Complete => "complete",
            InstanceClass::Tournament => "tournament",
            InstanceClass::Cluster => "cluster",
            InstanceClass::Path => "path",
            InstanceClass::Forest => "forest",
            InstanceClass::Treewidth => "treewidth",
            InstanceClass::Fvs => "fvs",
            InstanceClass::Cvd => "cvd",
            InstanceClass::General => "general",
        }
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown class '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostKind {
    Identity,
    /// Coefficients drawn from `1..=3`.
    Linear,
}

impl FromStr for CostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(CostKind::Identity),
            "linear" => Ok(CostKind::Linear),
            _ => Err(Error::Parse(format!("unknown cost kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub class: InstanceClass,
    pub n: usize,
    pub num_candidates: usize,
    /// Probability that a voter already ranks the preferred candidate first.
    pub supporter_frac: f64,
    pub cost: CostKind,
    pub rule: Rule,
    /// Drawn from `0..=5` when absent.
    pub budget: Option<u64>,
    /// Width bound for the treewidth class.
    pub width: usize,
    /// Size of the planted deletion set for the fvs and cvd classes.
    pub deletion: usize,
    /// Edge probability for the general class and planted-set attachments.
    pub density: f64,
}

impl GeneratorConfig {
    pub fn new(class: InstanceClass, n: usize) -> Self {
        GeneratorConfig {
            class,
            n,
            num_candidates: 2,
            supporter_frac: 0.3,
            cost: CostKind::Identity,
            rule: Rule::Majority,
            budget: None,
            width: 2,
            deletion: 2,
            density: 0.4,
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.num_candidates < 2 {
            return bad("need at least 2 candidates".into());
        }
        if !(0.0..=1.0).contains(&self.supporter_frac) {
            return bad(format!("supporter fraction {} is not in [0, 1]", self.supporter_frac));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return bad(format!("density {} is not in [0, 1]", self.density));
        }
        if matches!(self.class, InstanceClass::Fvs | InstanceClass::Cvd) && self.deletion > self.n {
            return bad(format!("deletion set size {} exceeds n = {}", self.deletion, self.n));
        }
        Ok(())
    }
}

pub fn generate(config: &GeneratorConfig, seed: u64) -> Result<Instance> {
    config.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.n;
    let network = match config.class {
        InstanceClass::Complete => undirected(&Graph::complete(n)),
        InstanceClass::Tournament => tournament(n, &mut rng)?,
        InstanceClass::Cluster => undirected(&cluster_graph(n, &mut rng)),
        InstanceClass::Path => {
            let arcs = (0..n.saturating_sub(1))
                .map(|i| InfluenceArc {
                    from: i + 1,
                    to: i,
                    weight: Weight::ONE,
                })
                .collect();
            InfluenceNetwork::new(n, arcs)?
        }
        InstanceClass::Forest => undirected(&random_forest(n, &mut rng)),
        InstanceClass::Treewidth => undirected(&partial_ktree(n, config.width, &mut rng)),
        InstanceClass::Fvs => {
            let base = random_forest(n - config.deletion, &mut rng);
            undirected(&plant(base, config.deletion, config.density, &mut rng))
        }
        InstanceClass::Cvd => {
            let base = cluster_graph(n - config.deletion, &mut rng);
            undirected(&plant(base, config.deletion, config.density, &mut rng))
        }
        InstanceClass::General => undirected(&gnp(n, config.density, &mut rng)),
    };
    let m = config.num_candidates;
    let preferred = m - 1;
    let rankings = (0..n)
        .map(|_| {
            let mut others: Vec<usize> = (0..m).filter(|&c| c != preferred).collect();
            others.shuffle(&mut rng);
            let pos = if rng.gen_bool(config.supporter_frac) { 0 } else { rng.gen_range(1..m) };
            others.insert(pos, preferred);
            others
        })
        .collect();
    let costs = match config.cost {
        CostKind::Identity => CostFamily::identity(n),
        CostKind::Linear => CostFamily::new((0..n).map(|_| CostFunction::Linear(rng.gen_range(1..=3))).collect()),
    };
    let budget = config.budget.unwrap_or_else(|| rng.gen_range(0..=5));
    Instance::new(m, preferred, PreferenceProfile::new(rankings), network, costs, budget, config.rule)
}

fn undirected(g: &Graph) -> InfluenceNetwork {
    InfluenceNetwork::from_undirected(g, Weight::ONE)
}

fn permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Arcs from earlier to later voters of a random order.
fn tournament(n: usize, rng: &mut ChaCha8Rng) -> Result<InfluenceNetwork> {
    let order = permutation(n, rng);
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            arcs.push(InfluenceArc {
                from: order[i],
                to: order[j],
                weight: Weight::ONE,
            });
        }
    }
    InfluenceNetwork::new(n, arcs)
}

/// Cliques of size 1 to 4 over a shuffled vertex order.
pub fn cluster_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let order = permutation(n, rng);
    let mut g = Graph::new(n);
    let mut start = 0;
    while start < n {
        let size = rng.gen_range(1..=4).min(n - start);
        let members = &order[start..start + size];
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                g.add_edge(u, v);
            }
        }
        start += size;
    }
    g
}

/// Each vertex joins a random earlier vertex with probability 0.8.
pub fn random_forest(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let order = permutation(n, rng);
    let mut g = Graph::new(n);
    for i in 1..n {
        if rng.gen_bool(0.8) {
            let j = rng.gen_range(0..i);
            g.add_edge(order[i], order[j]);
        }
    }
    g
}

/// Random subgraph of a `w`-tree, so treewidth at most `w`.
pub fn partial_ktree(n: usize, w: usize, rng: &mut ChaCha8Rng) -> Graph {
    let order = permutation(n, rng);
    let mut g = Graph::new(n);
    let first = (w + 1).min(n);
    let mut cliques: Vec<Vec<usize>> = vec![order[..first].to_vec()];
    for (i, &u) in order[..first].iter().enumerate() {
        for &v in &order[i + 1..first] {
            if rng.gen_bool(0.8) {
                g.add_edge(u, v);
            }
        }
    }
    for &v in &order[first..] {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        let mut clique: Vec<usize> = base.clone();
        clique.remove(rng.gen_range(0..clique.len()));
        for &u in &clique {
            if rng.gen_bool(0.7) {
                g.add_edge(u, v);
            }
        }
        clique.push(v);
        cliques.push(clique);
    }
    g
}

/// Adds `d` vertices, each adjacent to every other vertex with probability `p`.
fn plant(mut g: Graph, d: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let base = g.num_vertices();
    for _ in 0..d {
        g.add_vertex();
    }
    for x in base..base + d {
        for u in 0..x {
            if rng.gen_bool(p) {
                g.add_edge(u, x);
            }
        }
    }
    // Spread the planted vertices over the index range.
    relabel(&g, &permutation(g.num_vertices(), rng))
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.num_vertices(), &edges)
}

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// A seeded generator for callers building their own structures.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{detect_class, GraphClass};
    use crate::dp::decomposition::build_tree_decomposition;
    use crate::fpt::deletion::{find_deletion_set, DeletionKind};

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig::new(InstanceClass::Path, 5);
        assert_eq!(generate(&cfg, 7).unwrap(), generate(&cfg, 7).unwrap());
    }

    #[test]
    fn classes_have_their_shape() {
        for seed in 0..20 {
            let inst = generate(&GeneratorConfig::new(InstanceClass::Tournament, 6), seed).unwrap();
            let mut deg = inst.network().out_degrees();
            deg.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(deg, vec![5, 4, 3, 2, 1, 0]);
            assert_eq!(detect_class(&inst), GraphClass::TransitiveTournament);

            let inst = generate(&GeneratorConfig::new(InstanceClass::Cluster, 9), seed).unwrap();
            assert!(inst.network().support_graph().is_cluster_graph());

            let inst = generate(&GeneratorConfig::new(InstanceClass::Path, 5), seed).unwrap();
            assert_eq!(detect_class(&inst), GraphClass::DirectedPath);

            let inst = generate(&GeneratorConfig::new(InstanceClass::Forest, 8), seed).unwrap();
            assert!(inst.network().support_graph().is_forest());

            let inst = generate(&GeneratorConfig::new(InstanceClass::Treewidth, 10), seed).unwrap();
            assert!(build_tree_decomposition(&inst.network().support_graph()).width() <= 3);

            let g = generate(&GeneratorConfig::new(InstanceClass::Fvs, 8), seed)
                .unwrap()
                .network()
                .support_graph();
            assert!(find_deletion_set(&g, DeletionKind::FeedbackVertexSet).len() <= 2);
            let g = generate(&GeneratorConfig::new(InstanceClass::Cvd, 8), seed)
                .unwrap()
                .network()
                .support_graph();
            assert!(find_deletion_set(&g, DeletionKind::ClusterVertexDeletion).len() <= 2);
        }
    }

    #[test]
    fn supporter_fraction_extremes() {
        let mut cfg = GeneratorConfig::new(InstanceClass::General, 7);
        cfg.num_candidates = 3;
        cfg.supporter_frac = 1.0;
        assert_eq!(generate(&cfg, 1).unwrap().initial_supporters(), 7);
        cfg.supporter_frac = 0.0;
        assert_eq!(generate(&cfg, 1).unwrap().initial_supporters(), 0);
        cfg.supporter_frac = 1.5;
        assert!(generate(&cfg, 1).is_err());
    }

    #[test]
    fn names_round_trip() {
        for c in InstanceClass::ALL {
            assert_eq!(c.name().parse::<InstanceClass>().unwrap(), c);
        }
        assert!("nope".parse::<InstanceClass>().is_err());
    }
}
