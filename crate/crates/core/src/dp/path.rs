//! Right-to-left DP on the directed path `n-1 -> n-2 -> ... -> 0`.
//!
//! Voter `i` receives `s_i + s_{i+1}` (the last voter only `s_{n-1}`), so
//! it is convinced iff that sum reaches `tau_i = pos_i(c) - 1`.

use std::time::Instant;

use crate::classify::{is_directed_path, linear_coefficients, supporter_target};
use crate::election::{Instance, ShiftVector};
use crate::error::{precondition, Result};
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

const NEG: i32 = i32::MIN / 2;

/// Directed path with unit weights, linear costs, any number of candidates.
pub fn solve_path_dp(instance: &Instance) -> Result<SolveOutcome> {
    const NAME: &str = "path";
    let start = Instant::now();
    if !is_directed_path(instance.network()) {
        return Err(precondition(NAME, "network is not the directed path with arcs (i+1, i) of weight 1"));
    }
    let coef = linear_coefficients(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    let n = instance.num_voters();
    let m = instance.num_candidates();
    let tau: Vec<usize> = (0..n).map(|i| instance.shifts_needed(i)).collect();
    let max_spend: u64 = coef
        .iter()
        .map(|&b| b.saturating_mul((m - 1) as u64))
        .fold(0, u64::saturating_add);
    let cap = instance.budget().min(max_spend) as usize;
    let width = cap + 1;
    let idx = |i: usize, s: usize, c: usize| (i * m + s) * width + c;

    // f[i][s][c]: most convinced voters among i..n-1 when s_i = s and
    // voters i..n-1 cost exactly c. next[i][s][c] is the argmax s_{i+1}.
    let mut f = vec![NEG; n * m * width];
    let mut next = vec![0u16; n * m * width];
    let last = n - 1;
    for s in 0..m {
        let c = coef[last] as usize * s;
        if c <= cap {
            f[idx(last, s, c)] = i32::from(s >= tau[last]);
        }
    }
    for i in (0..last).rev() {
        for s in 0..m {
            let own = coef[i] as usize * s;
            if own > cap {
                continue;
            }
            for c in own..width {
                let rest = c - own;
                let mut best = NEG;
                let mut arg = 0u16;
                for s2 in 0..m {
                    let v = f[idx(i + 1, s2, rest)];
                    if v == NEG {
                        continue;
                    }
                    let v = v + i32::from(s + s2 >= tau[i]);
                    if v > best {
                        best = v;
                        arg = s2 as u16;
                    }
                }
                f[idx(i, s, c)] = best;
                next[idx(i, s, c)] = arg;
            }
        }
    }

    let stats = SolveStats {
        states: (n * m * width) as u64,
        ..SolveStats::default()
    };
    let found = (0..width).find_map(|c| {
        (0..m)
            .find(|&s| f[idx(0, s, c)] != NEG && f[idx(0, s, c)] as usize >= target)
            .map(|s| (c, s))
    });
    let Some((cost, s0)) = found else {
        return Ok(SolveOutcome::infeasible(Algorithm::Path, stats).timed(start));
    };
    let mut shifts = vec![0; n];
    let (mut s, mut c) = (s0, cost);
    for (i, slot) in shifts.iter_mut().enumerate() {
        *slot = s;
        if i == last {
            break;
        }
        let s2 = next[idx(i, s, c)] as usize;
        c -= coef[i] as usize * s;
        s = s2;
    }
    Ok(SolveOutcome::feasible(Algorithm::Path, cost as u64, ShiftVector(shifts), stats).timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{CostFamily, InfluenceArc, InfluenceNetwork, PreferenceProfile, Rule, Weight};
    use crate::oracle::brute_force_min_cost;

    fn path(rankings: Vec<Vec<usize>>, m: usize, budget: u64) -> Instance {
        let n = rankings.len();
        let arcs = (0..n - 1)
            .map(|i| InfluenceArc { from: i + 1, to: i, weight: Weight::ONE })
            .collect();
        Instance::new(
            m,
            m - 1,
            PreferenceProfile::new(rankings),
            InfluenceNetwork::new(n, arcs).unwrap(),
            CostFamily::identity(n),
            budget,
            Rule::Majority,
        )
        .unwrap()
    }

    #[test]
    fn three_voters_one_bribe() {
        let inst = path(vec![vec![0, 1]; 3], 2, 1);
        let out = solve_path_dp(&inst).unwrap();
        assert_eq!(out.verdict(), (true, Some(1)));
        assert!(inst.verify(out.witness.as_ref().unwrap()));
        assert_eq!(brute_force_min_cost(&inst).verdict(), out.verdict());
    }

    #[test]
    fn everyone_supports() {
        let inst = path(vec![vec![1, 0]; 4], 2, 0);
        assert_eq!(solve_path_dp(&inst).unwrap().verdict(), (true, Some(0)));
    }

    #[test]
    fn five_voters_three_candidates() {
        // Every voter needs an effective shift of 2; three convinced voters
        // need two disjoint adjacent pairs, so budget 3 is not enough.
        let inst = path(vec![vec![0, 1, 2]; 5], 3, 3);
        let out = solve_path_dp(&inst).unwrap();
        assert!(!out.feasible);
        assert!(!brute_force_min_cost(&inst).feasible);
        let inst = inst.with_budget(4);
        let out = solve_path_dp(&inst).unwrap();
        assert_eq!(out.verdict(), (true, Some(4)));
        assert_eq!(brute_force_min_cost(&inst).verdict(), out.verdict());
        assert!(inst.verify(out.witness.as_ref().unwrap()));
    }

    #[test]
    fn rejects_undirected_path() {
        let inst = Instance::new(
            2,
            1,
            PreferenceProfile::new(vec![vec![0, 1]; 3]),
            InfluenceNetwork::from_undirected(&crate::graph::Graph::path(3), Weight::ONE),
            CostFamily::identity(3),
            1,
            Rule::Majority,
        )
        .unwrap();
        assert!(solve_path_dp(&inst).is_err());
    }
}
