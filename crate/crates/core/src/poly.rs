//! Polynomial-time solvers for complete unit-weight networks and transitive
//! tournaments.
//!
//! On a complete network with unit weights every voter sees the same
//! effective shift `alpha = sum_j s_j`, so only `alpha` matters and the
//! cheapest way to buy it is to put all of it on the voter with the smallest
//! linear coefficient.

use std::time::Instant;

use crate::classify::{
    is_complete, linear_coefficients, require_two_candidates, require_unit_costs, require_unit_weights,
    supporter_target, transitive_order,
};
use crate::election::{Instance, ShiftVector, WinCondition};
use crate::error::{precondition, Result};
use crate::outcome::{Algorithm, SolveOutcome, SolveStats};

/// 1-based positions of the preferred candidate, one per voter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionVector(Vec<usize>);

impl PositionVector {
    pub fn of(instance: &Instance) -> Self {
        PositionVector(
            (0..instance.num_voters())
                .map(|i| instance.profile().position(i, instance.preferred()))
                .collect(),
        )
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    /// Candidate uniform shifts: `{0} ∪ {p_i - 1}`, sorted and deduplicated.
    pub fn candidate_shifts(&self) -> Vec<usize> {
        let mut out: Vec<usize> = std::iter::once(0).chain(self.0.iter().map(|p| p - 1)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn check_complete_unit(instance: &Instance, algorithm: &'static str) -> Result<Vec<u64>> {
    if !is_complete(instance.network()) {
        return Err(precondition(algorithm, "network is not complete"));
    }
    require_unit_weights(instance, algorithm)?;
    linear_coefficients(instance, algorithm)
}

/// Whether the preferred candidate wins when every voter receives the same
/// effective shift `alpha`.
pub fn wins_at_uniform_shift(instance: &Instance, alpha: usize) -> bool {
    let profile = instance.apply_effective(&vec![alpha; instance.num_voters()]);
    instance.preferred_wins(&profile)
}

/// Puts `alpha` on the cheapest voter and checks the budget.
fn realize(instance: &Instance, coefficients: &[u64], alpha: usize, algorithm: Algorithm, stats: SolveStats) -> SolveOutcome {
    let (cheapest, &coef) = coefficients
        .iter()
        .enumerate()
        .min_by_key(|&(i, &b)| (b, i))
        .expect("at least one voter");
    let cost = coef.saturating_mul(alpha as u64);
    if cost > instance.budget() {
        return SolveOutcome::infeasible(algorithm, stats);
    }
    let mut s = ShiftVector::zeros(instance.num_voters());
    s.0[cheapest] = alpha;
    SolveOutcome::feasible(algorithm, cost, s, stats)
}

/// Complete unit-weight network, linear costs, majority rule (any number of
/// candidates; the preferred candidate needs a strict majority of first
/// places). The minimal `alpha` is an order statistic of `p_i - 1`.
pub fn solve_complete_majority(instance: &Instance) -> Result<SolveOutcome> {
    const NAME: &str = "complete-majority";
    let start = Instant::now();
    let coefficients = check_complete_unit(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    let stats = SolveStats::default();
    if target == 0 {
        return Ok(realize(instance, &coefficients, 0, Algorithm::CompleteMajority, stats).timed(start));
    }
    let mut needed: Vec<usize> = (0..instance.num_voters()).map(|i| instance.shifts_needed(i)).collect();
    if target > needed.len() {
        return Ok(SolveOutcome::infeasible(Algorithm::CompleteMajority, stats).timed(start));
    }
    let (_, &mut alpha, _) = needed.select_nth_unstable(target - 1);
    Ok(realize(instance, &coefficients, alpha, Algorithm::CompleteMajority, stats).timed(start))
}

/// Complete unit-weight network, linear costs, plurality rule. Binary search
/// over the candidate shifts; winning is monotone in `alpha`.
pub fn solve_complete_plurality(instance: &Instance) -> Result<SolveOutcome> {
    const NAME: &str = "complete-plurality";
    let start = Instant::now();
    let coefficients = check_complete_unit(instance, NAME)?;
    if instance.win_condition() != WinCondition::Plurality {
        return Err(precondition(NAME, "needs the plurality rule"));
    }
    let candidates = PositionVector::of(instance).candidate_shifts();
    let mut probes = 0u64;
    // Invariant: the answer lies in candidates[lo..=hi]; the largest
    // candidate puts the preferred candidate on top of every ballot.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        probes += 1;
        if wins_at_uniform_shift(instance, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let alpha = candidates[lo];
    let stats = SolveStats {
        states: probes,
        ..SolveStats::default()
    };
    if !wins_at_uniform_shift(instance, alpha) {
        return Ok(SolveOutcome::infeasible(Algorithm::CompletePlurality, stats).timed(start));
    }
    Ok(realize(instance, &coefficients, alpha, Algorithm::CompletePlurality, stats).timed(start))
}

/// Transitive tournament, two candidates, unit costs and weights. Bribing the
/// first non-supporter in decreasing out-degree order converts everyone.
pub fn solve_transitive_tournament(instance: &Instance) -> Result<SolveOutcome> {
    const NAME: &str = "tournament";
    let start = Instant::now();
    let order = transitive_order(instance.network())
        .ok_or_else(|| precondition(NAME, "network is not a transitive tournament"))?;
    require_two_candidates(instance, NAME)?;
    require_unit_costs(instance, NAME)?;
    require_unit_weights(instance, NAME)?;
    let target = supporter_target(instance, NAME)?;
    let n = instance.num_voters();
    let stats = SolveStats {
        states: n as u64,
        ..SolveStats::default()
    };
    if instance.initial_supporters() >= target {
        return Ok(SolveOutcome::feasible(Algorithm::Tournament, 0, ShiftVector::zeros(n), stats).timed(start));
    }
    let first = order
        .iter()
        .copied()
        .find(|&v| !instance.is_initial_supporter(v))
        .expect("some voter is not a supporter");
    if target > n || instance.budget() < 1 {
        return Ok(SolveOutcome::infeasible(Algorithm::Tournament, stats).timed(start));
    }
    Ok(SolveOutcome::feasible(Algorithm::Tournament, 1, ShiftVector::from_bribed(n, [first]), stats).timed(start))
}
