//! Election model: profiles, the weighted influence network, cost functions,
//! and the semantics of applying a shift vector.
//!
//! Candidates and voters are `0`-based indices. A ranking lists candidates
//! from most to least preferred, so the preferred candidate `c` sits at
//! 1-based position `pos_i(c)` and needs `pos_i(c) - 1` shifts to reach the
//! top.
//!
//! Influence is one hop: voter `i` receives
//! `s'_i = s_i + sum_{(j,i)} floor(s_j * w(j,i))` and then moves `c` left by
//! `min(s'_i, pos_i(c) - 1)` positions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact non-negative rational edge weight `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    num: u64,
    den: u64,
}

impl Weight {
    pub const ONE: Weight = Weight { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInstance("weight denominator must be at least 1".into()));
        }
        Ok(Weight { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// `floor(shift * num / den)` in exact integer arithmetic.
    pub fn propagate(&self, shift: usize) -> usize {
        let v = (shift as u128 * self.num as u128) / self.den as u128;
        usize::try_from(v).unwrap_or(usize::MAX)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InfluenceArc {
    pub from: usize,
    pub to: usize,
    pub weight: Weight,
}

/// Directed weighted network over the voters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceNetwork {
    n: usize,
    arcs: Vec<InfluenceArc>,
    incoming: Vec<Vec<(usize, Weight)>>,
}

impl InfluenceNetwork {
    /// Validates and indexes an arc list. Arcs are stored sorted by
    /// `(from, to)`.
    pub fn new(n: usize, mut arcs: Vec<InfluenceArc>) -> Result<Self> {
        for a in &arcs {
            if a.from >= n || a.to >= n {
                return Err(Error::InvalidInstance(format!(
                    "arc ({}, {}) references a voter outside 0..{n}",
                    a.from, a.to
                )));
            }
            if a.from == a.to {
                return Err(Error::InvalidInstance(format!("self-arc on voter {}", a.from)));
            }
            if a.weight.den == 0 {
                return Err(Error::InvalidInstance("weight denominator must be at least 1".into()));
            }
        }
        arcs.sort_by_key(|a| (a.from, a.to));
        if let Some(w) = arcs.windows(2).find(|w| (w[0].from, w[0].to) == (w[1].from, w[1].to)) {
            return Err(Error::InvalidInstance(format!(
                "duplicate arc ({}, {})",
                w[0].from, w[0].to
            )));
        }
        let mut incoming = vec![Vec::new(); n];
        for a in &arcs {
            incoming[a.to].push((a.from, a.weight));
        }
        Ok(InfluenceNetwork { n, arcs, incoming })
    }

    pub fn empty(n: usize) -> Self {
        InfluenceNetwork {
            n,
            arcs: Vec::new(),
            incoming: vec![Vec::new(); n],
        }
    }

    /// Every undirected edge becomes two opposing arcs of weight `weight`.
    pub fn from_undirected(graph: &Graph, weight: Weight) -> Self {
        let mut arcs = Vec::with_capacity(2 * graph.num_edges());
        for (u, v) in graph.edges() {
            arcs.push(InfluenceArc { from: u, to: v, weight });
            arcs.push(InfluenceArc { from: v, to: u, weight });
        }
        InfluenceNetwork::new(graph.num_vertices(), arcs).expect("graph edges form a valid network")
    }

    pub fn num_voters(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[InfluenceArc] {
        &self.arcs
    }

    pub fn incoming(&self, voter: usize) -> &[(usize, Weight)] {
        &self.incoming[voter]
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<Weight> {
        self.incoming[to]
            .iter()
            .find(|&&(j, _)| j == from)
            .map(|&(_, w)| w)
    }

    pub fn all_unit_weights(&self) -> bool {
        self.arcs.iter().all(|a| a.weight.is_one())
    }

    /// True iff every arc has an opposing arc of the same weight.
    pub fn is_symmetric(&self) -> bool {
        self.arcs
            .iter()
            .all(|a| self.weight(a.to, a.from) == Some(a.weight))
    }

    /// Undirected support: `{u, v}` is an edge iff some arc joins them.
    pub fn support_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for a in &self.arcs {
            g.add_edge(a.from, a.to);
        }
        g
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for a in &self.arcs {
            deg[a.from] += 1;
        }
        deg
    }
}

/// Price of shifting the preferred candidate by `s` positions for one voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CostFunction {
    Identity,
    Linear(u64),
    /// `values[s]` for `s` in `0..m`.
    Table(Vec<u64>),
}

impl CostFunction {
    /// Cost of a shift inside the domain; callers check the domain.
    pub fn cost(&self, s: usize) -> u64 {
        match self {
            CostFunction::Identity => s as u64,
            CostFunction::Linear(b) => b.saturating_mul(s as u64),
            CostFunction::Table(values) => values[s],
        }
    }

    /// The coefficient `b_i` when the function is `s -> b_i * s`.
    pub fn linear_coefficient(&self) -> Option<u64> {
        match self {
            CostFunction::Identity => Some(1),
            CostFunction::Linear(b) => Some(*b),
            CostFunction::Table(values) => {
                let b = values.get(1).copied().unwrap_or(0);
                values
                    .iter()
                    .enumerate()
                    .all(|(s, &v)| Some(v) == b.checked_mul(s as u64))
                    .then_some(b)
            }
        }
    }
}

/// One cost function per voter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostFamily {
    functions: Vec<CostFunction>,
}

impl CostFamily {
    pub fn new(functions: Vec<CostFunction>) -> Self {
        CostFamily { functions }
    }

    pub fn identity(n: usize) -> Self {
        CostFamily::new(vec![CostFunction::Identity; n])
    }

    pub fn linear(coefficients: &[u64]) -> Self {
        CostFamily::new(coefficients.iter().map(|&b| CostFunction::Linear(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn get(&self, voter: usize) -> &CostFunction {
        &self.functions[voter]
    }

    pub fn iter(&self) -> impl Iterator<Item = &CostFunction> {
        self.functions.iter()
    }

    fn validate(&self, m: usize) -> Result<()> {
        for (i, f) in self.functions.iter().enumerate() {
            if let CostFunction::Table(values) = f {
                if values.len() != m {
                    return Err(Error::InvalidInstance(format!(
                        "cost table of voter {i} has {} entries, expected {m}",
                        values.len()
                    )));
                }
                if values[0] != 0 {
                    return Err(Error::InvalidInstance(format!(
                        "cost table of voter {i} must start with 0"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    rankings: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    pub fn new(rankings: Vec<Vec<usize>>) -> Self {
        PreferenceProfile { rankings }
    }

    pub fn num_voters(&self) -> usize {
        self.rankings.len()
    }

    pub fn ranking(&self, voter: usize) -> &[usize] {
        &self.rankings[voter]
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    pub fn top(&self, voter: usize) -> usize {
        self.rankings[voter][0]
    }

    /// 1-based rank of `candidate` in the voter's ranking.
    pub fn position(&self, voter: usize, candidate: usize) -> usize {
        self.rankings[voter]
            .iter()
            .position(|&c| c == candidate)
            .expect("rankings are permutations")
            + 1
    }

    fn validate(&self, m: usize) -> Result<()> {
        for (i, r) in self.rankings.iter().enumerate() {
            if !is_permutation(r, m) {
                return Err(Error::InvalidInstance(format!(
                    "ranking of voter {i} is not a permutation of 0..{m}"
                )));
            }
        }
        Ok(())
    }
}

fn is_permutation(order: &[usize], m: usize) -> bool {
    if order.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &c in order {
        if c >= m || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Majority,
    Plurality,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Majority => "majority",
            Rule::Plurality => "plurality",
        })
    }
}

/// Election result. Majority elections without a strict majority yield
/// `NoMajority`, which is distinct from every candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Candidate(usize),
    NoMajority,
}

/// What the preferred candidate has to achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinCondition {
    /// At least this many voters rank the preferred candidate first.
    Supporters(usize),
    /// Unique plurality winner after tie-breaking.
    Plurality,
}

/// Number of first-place votes needed for a strict majority of `n` voters,
/// i.e. `ceil((n + 1) / 2)`.
pub fn majority_quota(n: usize) -> usize {
    n / 2 + 1
}

/// Winner under `rule`. `tiebreak` lists candidates from highest to lowest
/// tie-breaking priority.
pub fn winner(profile: &PreferenceProfile, num_candidates: usize, rule: Rule, tiebreak: &[usize]) -> Winner {
    let mut tops = vec![0usize; num_candidates];
    for r in profile.rankings() {
        tops[r[0]] += 1;
    }
    match rule {
        Rule::Majority => {
            let quota = majority_quota(profile.num_voters());
            tops.iter()
                .position(|&t| t >= quota)
                .map_or(Winner::NoMajority, Winner::Candidate)
        }
        Rule::Plurality => {
            let best = tops.iter().copied().max().unwrap_or(0);
            let c = tiebreak
                .iter()
                .copied()
                .find(|&c| tops[c] == best)
                .expect("tiebreak covers all candidates");
            Winner::Candidate(c)
        }
    }
}

/// Per-voter direct shifts chosen by the briber.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ShiftVector(pub Vec<usize>);

impl ShiftVector {
    pub fn zeros(n: usize) -> Self {
        ShiftVector(vec![0; n])
    }

    /// Unit shifts on the given voters.
    pub fn from_bribed(n: usize, bribed: impl IntoIterator<Item = usize>) -> Self {
        let mut s = vec![0; n];
        for v in bribed {
            s[v] = 1;
        }
        ShiftVector(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn bribed(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &s)| s > 0).map(|(i, _)| i)
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    num_candidates: usize,
    preferred: usize,
    profile: PreferenceProfile,
    network: InfluenceNetwork,
    costs: CostFamily,
    budget: u64,
    rule: Rule,
    tiebreak: Vec<usize>,
    supporter_threshold: Option<usize>,
}

/// Everything `verify` looks at, for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub cost: u64,
    pub effective: Vec<usize>,
    pub winner: Winner,
    pub supporters: usize,
    pub within_budget: bool,
    pub preferred_wins: bool,
}

impl Instance {
    /// Validates all cross-component invariants. The tie-breaking order
    /// defaults to `0, 1, ..., m-1`.
    pub fn new(
        num_candidates: usize,
        preferred: usize,
        profile: PreferenceProfile,
        network: InfluenceNetwork,
        costs: CostFamily,
        budget: u64,
        rule: Rule,
    ) -> Result<Self> {
        let inst = Instance {
            num_candidates,
            preferred,
            profile,
            network,
            costs,
            budget,
            rule,
            tiebreak: (0..num_candidates).collect(),
            supporter_threshold: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        let m = self.num_candidates;
        if m < 2 {
            return Err(Error::InvalidInstance(format!("need at least 2 candidates, got {m}")));
        }
        if self.preferred >= m {
            return Err(Error::InvalidInstance(format!(
                "preferred candidate {} is not in 0..{m}",
                self.preferred
            )));
        }
        let n = self.profile.num_voters();
        if n == 0 {
            return Err(Error::InvalidInstance("need at least one voter".into()));
        }
        if self.network.num_voters() != n {
            return Err(Error::InvalidInstance(format!(
                "network has {} voters, profile has {n}",
                self.network.num_voters()
            )));
        }
        if self.costs.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} cost functions for {n} voters",
                self.costs.len()
            )));
        }
        if !is_permutation(&self.tiebreak, m) {
            return Err(Error::InvalidInstance(format!(
                "tie-breaking order is not a permutation of 0..{m}"
            )));
        }
        self.profile.validate(m)?;
        self.costs.validate(m)
    }

    pub fn with_tiebreak(mut self, order: Vec<usize>) -> Result<Self> {
        self.tiebreak = order;
        self.validate()?;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Switches to threshold mode: the preferred candidate wins iff at
    /// least `t` voters rank it first, regardless of the rule.
    pub fn with_supporter_threshold(mut self, t: Option<usize>) -> Self {
        self.supporter_threshold = t;
        self
    }

    pub fn num_voters(&self) -> usize {
        self.profile.num_voters()
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn preferred(&self) -> usize {
        self.preferred
    }

    pub fn profile(&self) -> &PreferenceProfile {
        &self.profile
    }

    pub fn network(&self) -> &InfluenceNetwork {
        &self.network
    }

    pub fn costs(&self) -> &CostFamily {
        &self.costs
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn tiebreak(&self) -> &[usize] {
        &self.tiebreak
    }

    pub fn supporter_threshold(&self) -> Option<usize> {
        self.supporter_threshold
    }

    /// Largest direct shift any cost function prices.
    pub fn max_shift(&self) -> usize {
        self.num_candidates - 1
    }

    pub fn win_condition(&self) -> WinCondition {
        match (self.supporter_threshold, self.rule) {
            (Some(t), _) => WinCondition::Supporters(t),
            (None, Rule::Majority) => WinCondition::Supporters(majority_quota(self.num_voters())),
            (None, Rule::Plurality) => WinCondition::Plurality,
        }
    }

    /// Supporters the preferred candidate needs, unless the rule is plurality.
    pub fn required_supporters(&self) -> Option<usize> {
        match self.win_condition() {
            WinCondition::Supporters(t) => Some(t),
            WinCondition::Plurality => None,
        }
    }

    /// `pos_i(c) - 1`: the effective shift voter `i` needs to rank the
    /// preferred candidate first.
    pub fn shifts_needed(&self, voter: usize) -> usize {
        self.profile.position(voter, self.preferred) - 1
    }

    pub fn is_initial_supporter(&self, voter: usize) -> bool {
        self.profile.top(voter) == self.preferred
    }

    /// Number of voters already ranking the preferred candidate first.
    pub fn initial_supporters(&self) -> usize {
        (0..self.num_voters()).filter(|&i| self.is_initial_supporter(i)).count()
    }

    fn check_shape(&self, s: &ShiftVector) -> Result<()> {
        if s.len() != self.num_voters() {
            return Err(Error::DimensionMismatch {
                expected: self.num_voters(),
                found: s.len(),
            });
        }
        let max = self.max_shift();
        if let Some((voter, &shift)) = s.0.iter().enumerate().find(|(_, &x)| x > max) {
            return Err(Error::ShiftOutOfRange { voter, shift, max });
        }
        Ok(())
    }

    /// `s'_i = s_i + sum over in-arcs (j, i) of floor(s_j * w(j, i))`.
    pub fn effective_shifts(&self, s: &ShiftVector) -> Result<Vec<usize>> {
        self.check_shape(s)?;
        Ok((0..self.num_voters())
            .map(|i| {
                self.network
                    .incoming(i)
                    .iter()
                    .fold(s.0[i], |acc, &(j, w)| acc.saturating_add(w.propagate(s.0[j])))
            })
            .collect())
    }

    /// Moves the preferred candidate left by `min(effective_i, pos_i(c) - 1)`
    /// in every ranking.
    pub fn apply_effective(&self, effective: &[usize]) -> PreferenceProfile {
        let rankings = self
            .profile
            .rankings()
            .iter()
            .zip(effective)
            .map(|(r, &e)| {
                let from = r.iter().position(|&c| c == self.preferred).expect("permutation");
                let to = from - e.min(from);
                let mut out = r.clone();
                out[to..=from].rotate_right(1);
                out
            })
            .collect();
        PreferenceProfile::new(rankings)
    }

    pub fn apply_shift(&self, s: &ShiftVector) -> Result<PreferenceProfile> {
        Ok(self.apply_effective(&self.effective_shifts(s)?))
    }

    pub fn winner_of(&self, profile: &PreferenceProfile) -> Winner {
        winner(profile, self.num_candidates, self.rule, &self.tiebreak)
    }

    /// Whether the preferred candidate wins `profile` under the instance's
    /// win condition (threshold mode included).
    pub fn preferred_wins(&self, profile: &PreferenceProfile) -> bool {
        match self.win_condition() {
            WinCondition::Supporters(t) => {
                let supporters = (0..profile.num_voters())
                    .filter(|&i| profile.top(i) == self.preferred)
                    .count();
                supporters >= t
            }
            WinCondition::Plurality => self.winner_of(profile) == Winner::Candidate(self.preferred),
        }
    }

    /// `sum_i pi_i(s_i)`.
    pub fn shift_cost(&self, s: &ShiftVector) -> Result<u64> {
        self.check_shape(s)?;
        Ok(s.0
            .iter()
            .zip(self.costs.iter())
            .fold(0u64, |acc, (&x, f)| acc.saturating_add(f.cost(x))))
    }

    pub fn evaluate(&self, s: &ShiftVector) -> Result<Evaluation> {
        let cost = self.shift_cost(s)?;
        let effective = self.effective_shifts(s)?;
        let profile = self.apply_effective(&effective);
        let supporters = (0..profile.num_voters())
            .filter(|&i| profile.top(i) == self.preferred)
            .count();
        Ok(Evaluation {
            cost,
            winner: self.winner_of(&profile),
            supporters,
            within_budget: cost <= self.budget,
            preferred_wins: self.preferred_wins(&profile),
            effective,
        })
    }

    /// True iff `s` is affordable and makes the preferred candidate win.
    /// Malformed vectors are rejected.
    pub fn verify(&self, s: &ShiftVector) -> bool {
        self.evaluate(s)
            .map(|e| e.within_budget && e.preferred_wins)
            .unwrap_or(false)
    }
}
