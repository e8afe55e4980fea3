//! Bag DP over a nice tree decomposition for two candidates, unit costs and
//! unit weights.
//!
//! Every bag vertex carries one of four states (two bits, `U = 0`):
//!
//! * `B`: bribed. Counts one if it is not already a supporter.
//! * `C`: counted as convinced, and a bribed neighbor has been seen.
//! * `P`: counted as convinced, still waiting for a bribed neighbor.
//! * `U`: not counted.
//!
//! A vertex in `P` cannot be forgotten. Voters that already support the
//! preferred candidate are never counted (they are added at the end) and may
//! only be `B` or `U`. Table entries are indexed by the exact number of
//! bribes in the subtree, capped at `kappa`.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::classify::{require_two_candidates, require_unit_costs, require_unit_weights, supporter_target, undirected_support};
use crate::dp::decomposition::{build_tree_decomposition, make_nice, NiceNode, NiceTreeDecomposition, TreeDecomposition};
use crate::election::{Instance, ShiftVector};
use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

pub const STATE_U: u64 = 0;
pub const STATE_B: u64 = 1;
pub const STATE_C: u64 = 2;
pub const STATE_P: u64 = 3;

/// Largest bag the 64-bit state keys can hold.
pub const MAX_BAG: usize = 32;

const LOW: u64 = 0x5555_5555_5555_5555;
const NEG: i32 = i32::MIN / 2;

/// Per key, value for each exact bribe count `0..=cap` (`None` = unreachable).
pub type ValueTable = BTreeMap<u64, Vec<Option<u32>>>;

#[derive(Debug, Clone, Copy)]
struct Cell {
    value: i32,
    /// Child key(s) and the (left) child budget this entry came from.
    a: u64,
    b: u64,
    budget: u32,
}

const EMPTY: Cell = Cell {
    value: NEG,
    a: 0,
    b: 0,
    budget: 0,
};

type Table = BTreeMap<u64, Vec<Cell>>;

fn state(key: u64, pos: usize) -> u64 {
    (key >> (2 * pos)) & 3
}

fn with_state(key: u64, pos: usize, st: u64) -> u64 {
    (key & !(3 << (2 * pos))) | (st << (2 * pos))
}

fn insert_slot(key: u64, pos: usize, st: u64) -> u64 {
    let low = key & ((1u64 << (2 * pos)) - 1);
    let high = key >> (2 * pos);
    low | (st << (2 * pos)) | high.checked_shl(2 * pos as u32 + 2).unwrap_or(0)
}

fn remove_slot(key: u64, pos: usize) -> u64 {
    let low = key & ((1u64 << (2 * pos)) - 1);
    let high = key.checked_shr(2 * pos as u32 + 2).unwrap_or(0);
    low | high.checked_shl(2 * pos as u32).unwrap_or(0)
}

/// Bit masks (on the low bit of each slot) of `B`, counted and `P` slots.
fn masks(key: u64) -> (u64, u64, u64) {
    let low = key & LOW;
    let high = (key >> 1) & LOW;
    (low & !high, high, low & high)
}

fn relax(cells: &mut [Cell], budget: usize, cell: Cell) {
    if cell.value > cells[budget].value {
        cells[budget] = cell;
    }
}

/// Join of two children with equal bags. `supporters` marks (low bit per
/// slot) bag positions holding pre-existing supporters.
fn join(left: &Table, right: &Table, supporters: u64, cap: usize) -> Table {
    let mut by_shape: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &k in right.keys() {
        let (_, _, pend) = masks(k);
        by_shape.entry(k & !pend).or_default().push(k);
    }
    let mut out = Table::new();
    for (&lk, lcells) in left {
        let (bribed, counted, lpend) = masks(lk);
        let Some(partners) = by_shape.get(&(lk & !lpend)) else {
            continue;
        };
        let nb = bribed.count_ones() as usize;
        let shared = (bribed & !supporters).count_ones() as i32 + counted.count_ones() as i32;
        for &rk in partners {
            let (_, _, rpend) = masks(rk);
            let key = (lk & !lpend) | (lpend & rpend);
            let rcells = &right[&rk];
            for (b1, l) in lcells.iter().enumerate() {
                if l.value == NEG {
                    continue;
                }
                for (b2, r) in rcells.iter().enumerate() {
                    if r.value == NEG || b1 + b2 < nb {
                        continue;
                    }
                    let b = b1 + b2 - nb;
                    if b > cap {
                        break;
                    }
                    let cells = out.entry(key).or_insert_with(|| vec![EMPTY; cap + 1]);
                    relax(
                        cells,
                        b,
                        Cell {
                            value: l.value + r.value - shared,
                            a: lk,
                            b: rk,
                            budget: b1 as u32,
                        },
                    );
                }
            }
        }
    }
    out
}

/// Join on plain value tables, for testing the combination rule in isolation.
pub fn join_values(left: &ValueTable, right: &ValueTable, supporters: u64, cap: usize) -> ValueTable {
    let lift = |t: &ValueTable| -> Table {
        t.iter()
            .map(|(&k, vals)| {
                let cells = (0..=cap)
                    .map(|b| match vals.get(b).copied().flatten() {
                        Some(v) => Cell { value: v as i32, ..EMPTY },
                        None => EMPTY,
                    })
                    .collect();
                (k, cells)
            })
            .collect()
    };
    join(&lift(left), &lift(right), supporters, cap)
        .into_iter()
        .map(|(k, cells)| (k, cells.iter().map(|c| (c.value != NEG).then_some(c.value as u32)).collect()))
        .collect()
}

/// Inputs of the bag DP: who already supports and who may be bribed.
pub(crate) struct InfluenceProblem<'a> {
    pub graph: &'a Graph,
    pub supporter: &'a [bool],
    pub bribable: &'a [bool],
}

pub(crate) struct InfluenceRun<'a> {
    nice: &'a NiceTreeDecomposition,
    tables: Vec<Table>,
    pub states: u64,
}

impl InfluenceRun<'_> {
    /// Most newly convinced voters with exactly `b` bribes.
    pub fn value(&self, b: usize) -> Option<usize> {
        let root = &self.tables[self.nice.root()];
        let cell = root.get(&0)?.get(b)?;
        (cell.value != NEG).then_some(cell.value as usize)
    }

    /// Smallest bribe count reaching at least `need` newly convinced voters.
    pub fn min_bribes(&self, need: usize) -> Option<usize> {
        let root = self.tables[self.nice.root()].get(&0)?;
        (0..root.len()).find(|&b| self.value(b).is_some_and(|v| v >= need))
    }

    /// Bribed vertices of an optimal assignment with `b` bribes.
    pub fn bribed(&self, b: usize, n: usize) -> Vec<usize> {
        let mut out = vec![false; n];
        let mut stack = vec![(self.nice.root(), 0u64, b)];
        while let Some((t, key, budget)) = stack.pop() {
            let cell = self.tables[t][&key][budget];
            match self.nice.nodes()[t] {
                NiceNode::Leaf => {}
                NiceNode::Introduce { vertex, child } => {
                    let pos = self.nice.bag(t).binary_search(&vertex).expect("introduced vertex in bag");
                    if state(key, pos) == STATE_B {
                        out[vertex] = true;
                    }
                    stack.push((child, cell.a, cell.budget as usize));
                }
                NiceNode::Forget { child, .. } => stack.push((child, cell.a, cell.budget as usize)),
                NiceNode::Join { left, right } => {
                    let (bribed, _, _) = masks(key);
                    let lb = cell.budget as usize;
                    let rb = budget + bribed.count_ones() as usize - lb;
                    stack.push((left, cell.a, lb));
                    stack.push((right, cell.b, rb));
                }
            }
        }
        (0..n).filter(|&v| out[v]).collect()
    }
}

/// Runs the bag DP bottom-up with the budget axis `0..=cap`.
pub(crate) fn run_influence_dp<'a>(
    problem: &InfluenceProblem<'_>,
    nice: &'a NiceTreeDecomposition,
    cap: usize,
) -> Result<InfluenceRun<'a>> {
    if let Some(i) = (0..nice.len()).find(|&i| nice.bag(i).len() > MAX_BAG) {
        return Err(Error::InvalidDecomposition(format!(
            "bag of node {i} has {} vertices; at most {MAX_BAG} are supported",
            nice.bag(i).len()
        )));
    }
    let width = cap + 1;
    let mut tables: Vec<Table> = Vec::with_capacity(nice.len());
    let mut states = 0u64;
    for (t, node) in nice.nodes().iter().enumerate() {
        let bag = nice.bag(t);
        let table = match *node {
            NiceNode::Leaf => {
                let mut cells = vec![EMPTY; width];
                cells[0] = Cell { value: 0, ..EMPTY };
                Table::from([(0, cells)])
            }
            NiceNode::Introduce { vertex: v, child } => {
                let pos = bag.binary_search(&v).expect("introduced vertex in bag");
                let nbr_pos: Vec<usize> = bag
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| problem.graph.has_edge(u, v))
                    .map(|(p, _)| p)
                    .collect();
                let supporter = problem.supporter[v];
                let mut out = Table::new();
                for (&ck, ccells) in &tables[child] {
                    let base = insert_slot(ck, pos, STATE_U);
                    let mut options: Vec<(u64, i32, usize)> = vec![(base, 0, 0)];
                    if problem.bribable[v] {
                        let mut key = with_state(base, pos, STATE_B);
                        for &q in &nbr_pos {
                            if state(key, q) == STATE_P {
                                key = with_state(key, q, STATE_C);
                            }
                        }
                        options.push((key, i32::from(!supporter), 1));
                    }
                    if !supporter {
                        let seen = nbr_pos.iter().any(|&q| state(base, q) == STATE_B);
                        let st = if seen { STATE_C } else { STATE_P };
                        options.push((with_state(base, pos, st), 1, 0));
                    }
                    for (key, gain, extra) in options {
                        for (b, c) in ccells.iter().enumerate() {
                            if c.value == NEG || b + extra > cap {
                                continue;
                            }
                            let cells = out.entry(key).or_insert_with(|| vec![EMPTY; width]);
                            relax(
                                cells,
                                b + extra,
                                Cell {
                                    value: c.value + gain,
                                    a: ck,
                                    b: 0,
                                    budget: b as u32,
                                },
                            );
                        }
                    }
                }
                out
            }
            NiceNode::Forget { vertex: v, child } => {
                let pos = nice.bag(child).binary_search(&v).expect("forgotten vertex in child bag");
                let mut out = Table::new();
                for (&ck, ccells) in &tables[child] {
                    if state(ck, pos) == STATE_P {
                        continue;
                    }
                    let key = remove_slot(ck, pos);
                    let cells = out.entry(key).or_insert_with(|| vec![EMPTY; width]);
                    for (b, c) in ccells.iter().enumerate() {
                        if c.value != NEG {
                            relax(
                                cells,
                                b,
                                Cell {
                                    value: c.value,
                                    a: ck,
                                    b: 0,
                                    budget: b as u32,
                                },
                            );
                        }
                    }
                }
                out
            }
            NiceNode::Join { left, right } => {
                let supporters = bag
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| problem.supporter[u])
                    .fold(0u64, |acc, (p, _)| acc | (1 << (2 * p)));
                join(&tables[left], &tables[right], supporters, cap)
            }
        };
        states += (table.len() * width) as u64;
        tables.push(table);
    }
    Ok(InfluenceRun { nice, tables, states })
}

/// Runs the DP on a given nice decomposition of the instance's network.
pub fn solve_treewidth_dp(instance: &Instance, nice: &NiceTreeDecomposition) -> Result<SolveOutcome> {
    const NAME: &str = "treewidth";
    let start = Instant::now();
    let graph = undirected_support(instance, NAME)?;
    require_two_candidates(instance, NAME)?;
    require_unit_costs(instance, NAME)?;
    require_unit_weights(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    nice.validate(&graph)?;
    let n = instance.num_voters();
    let supporter: Vec<bool> = (0..n).map(|v| instance.is_initial_supporter(v)).collect();
    let bribable = vec![true; n];
    let ell = instance.initial_supporters();
    let kappa = target.saturating_sub(ell);
    let cap = (instance.budget().min(kappa as u64)) as usize;
    let problem = InfluenceProblem {
        graph: &graph,
        supporter: &supporter,
        bribable: &bribable,
    };
    let run = run_influence_dp(&problem, nice, cap)?;
    let stats = SolveStats {
        states: run.states,
        width: Some(nice.width()),
        kappa: Some(kappa),
        ..SolveStats::default()
    };
    let outcome = match run.min_bribes(kappa) {
        Some(b) => {
            let witness = ShiftVector::from_bribed(n, run.bribed(b, n));
            SolveOutcome::feasible(Algorithm::Treewidth, b as u64, witness, stats)
        }
        None => SolveOutcome::infeasible(Algorithm::Treewidth, stats),
    };
    Ok(outcome.timed(start))
}

/// Builds (or takes) a decomposition, nicifies it and runs the DP.
pub fn solve_treewidth(instance: &Instance, decomposition: Option<&TreeDecomposition>) -> Result<SolveOutcome> {
    let graph = undirected_support(instance, "treewidth")?;
    let dec = match decomposition {
        Some(d) => {
            d.validate(&graph)?;
            d.clone()
        }
        None => build_tree_decomposition(&graph),
    };
    if dec.width() + 1 > MAX_BAG {
        return Err(precondition("treewidth", format!("decomposition width {} is too large", dec.width())));
    }
    solve_treewidth_dp(instance, &make_nice(&dec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn slot_arithmetic() {
        let key = with_state(with_state(0, 0, STATE_B), 2, STATE_P);
        assert_eq!(state(key, 0), STATE_B);
        assert_eq!(state(key, 1), STATE_U);
        assert_eq!(state(key, 2), STATE_P);
        let ins = insert_slot(key, 1, STATE_C);
        assert_eq!((state(ins, 0), state(ins, 1), state(ins, 2), state(ins, 3)), (STATE_B, STATE_C, STATE_U, STATE_P));
        assert_eq!(remove_slot(ins, 1), key);
        let full = insert_slot(0, 31, STATE_P);
        assert_eq!(state(full, 31), STATE_P);
        assert_eq!(remove_slot(full, 31), 0);
    }

    #[test]
    fn edgeless_needs_a_majority_of_bribes() {
        let g = Graph::new(5);
        let out = solve_treewidth(&instance(&g, &[], 3), None).unwrap();
        assert_eq!(out.verdict(), (true, Some(3)));
        assert!(!solve_treewidth(&instance(&g, &[], 2), None).unwrap().feasible);
    }

    #[test]
    fn star_center() {
        let inst = instance(&Graph::star(4), &[], 1);
        let out = solve_treewidth(&inst, None).unwrap();
        assert_eq!(out.witness, Some(ShiftVector(vec![1, 0, 0, 0, 0])));
    }

    #[test]
    fn path_of_seven() {
        let inst = instance(&Graph::path(7), &[], 2);
        let out = solve_treewidth(&inst, None).unwrap();
        assert_eq!(out.verdict(), (true, Some(2)));
        assert!(inst.verify(out.witness.as_ref().unwrap()));
        assert_eq!(brute_force_min_cost(&inst).verdict(), out.verdict());
    }

    #[test]
    fn supporters_are_not_double_counted() {
        // 0 - 1 - 2 - 3 - 4 with 1 and 3 supporting: target 3, ell 2.
        let inst = instance(&Graph::path(5), &[1, 3], 1);
        let out = solve_treewidth(&inst, None).unwrap();
        assert_eq!(out.verdict(), brute_force_min_cost(&inst).verdict());
        assert_eq!(out.verdict(), (true, Some(1)));
    }

    #[test]
    fn matches_oracle_on_small_graphs() {
        let graphs = [Graph::cycle(5), Graph::complete(4), Graph::cycle(6), {
            let mut g = Graph::cycle(4);
            g.add_vertex();
            g.add_edge(0, 4);
            g.add_edge(2, 4);
            g
        }];
        for g in &graphs {
            for budget in 0..3 {
                for sup in [vec![], vec![0], vec![1, 2]] {
                    let inst = instance(g, &sup, budget);
                    let out = solve_treewidth(&inst, None).unwrap();
                    assert_eq!(out.verdict(), brute_force_min_cost(&inst).verdict(), "{g:?} {sup:?} b={budget}");
                    if let Some(w) = &out.witness {
                        assert!(inst.verify(w));
                    }
                }
            }
        }
    }

    #[test]
    fn join_with_empty_bag_adds() {
        let left = ValueTable::from([(0, vec![Some(0), Some(2), None])]);
        let right = ValueTable::from([(0, vec![Some(1), Some(3), Some(4)])]);
        let out = join_values(&left, &right, 0, 2);
        assert_eq!(out[&0], vec![Some(1), Some(3), Some(5)]);
    }

    #[test]
    fn join_merges_certification() {
        // One bag vertex, counted on both sides: certified on the left only.
        let left = ValueTable::from([(STATE_C, vec![Some(1), None])]);
        let right = ValueTable::from([(STATE_P, vec![Some(3), None])]);
        let out = join_values(&left, &right, 0, 1);
        assert_eq!(out.get(&STATE_C), Some(&vec![Some(3), None]));
        assert!(!out.contains_key(&STATE_P));
        // A bribed bag vertex is paid for once.
        let left = ValueTable::from([(STATE_B, vec![None, Some(1)])]);
        let right = ValueTable::from([(STATE_B, vec![None, Some(2)])]);
        assert_eq!(join_values(&left, &right, 0, 1)[&STATE_B], vec![None, Some(2)]);
    }
}
