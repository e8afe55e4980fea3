//! Cross-checking harness: runs several solvers on a corpus and compares
//! their `(feasible, cost)` verdicts.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::election::{Instance, ShiftVector};
use crate::error::{Error, Result};
use crate::outcome::{Algorithm, SolveOutcome};
use crate::solve::SolveOptions;

/// A named corpus entry with its solver options (e.g. an embedded
/// decomposition).
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub name: String,
    pub instance: Instance,
    pub options: SolveOptions,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub feasible: bool,
    pub cost: Option<u64>,
    pub param: String,
    pub states: u64,
    /// Fastest of the repeats.
    pub micros: u128,
    pub witness: Option<ShiftVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    /// Two algorithms disagree on `(feasible, cost)`.
    Disagreement { reference: BenchRow, other: BenchRow },
    /// A witness fails verification.
    InvalidWitness(BenchRow),
    /// A solver failed for a reason other than its preconditions.
    Failed {
        instance: String,
        algorithm: Algorithm,
        message: String,
    },
}

impl Issue {
    pub fn describe(&self) -> String {
        let show = |r: &BenchRow| {
            let w = r.witness.as_ref().map_or("-".to_string(), |w| w.to_string());
            format!("{}: feasible={} cost={} witness={w}", r.algorithm, r.feasible, cost_str(r.cost))
        };
        match self {
            Issue::Disagreement { reference, other } => {
                format!("{}: disagreement\n  {}\n  {}", reference.instance, show(reference), show(other))
            }
            Issue::InvalidWitness(r) => format!("{}: invalid witness from {}", r.instance, show(r)),
            Issue::Failed {
                instance,
                algorithm,
                message,
            } => format!("{instance}: {algorithm} failed: {message}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// `(instance, algorithm, reason)` for inapplicable pairs.
    pub skipped: Vec<(String, Algorithm, String)>,
    pub issues: Vec<Issue>,
}

fn cost_str(cost: Option<u64>) -> String {
    cost.map_or("-".into(), |c| c.to_string())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BenchReport {
    pub fn is_consistent(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,algorithm,feasible,cost,param,states,micros\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                csv_field(&r.instance),
                r.algorithm,
                r.feasible,
                r.cost.map_or(String::new(), |c| c.to_string()),
                csv_field(&r.param),
                r.states,
                r.micros
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let header = ["instance", "algorithm", "feasible", "cost", "param", "states", "micros"];
        let cells: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.instance.clone(),
                    r.algorithm.to_string(),
                    r.feasible.to_string(),
                    cost_str(r.cost),
                    r.param.clone(),
                    r.states.to_string(),
                    r.micros.to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[String]| {
            let parts: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &header.map(String::from));
        for row in &cells {
            line(&mut out, row);
        }
        out
    }

    pub fn summary(&self) -> String {
        let instances = {
            let mut names: Vec<&str> = self.rows.iter().map(|r| r.instance.as_str()).collect();
            names.dedup();
            names.len()
        };
        format!(
            "{} rows over {instances} instances, {} skipped, {} issues",
            self.rows.len(),
            self.skipped.len(),
            self.issues.len()
        )
    }
}

/// Runs every algorithm `repeat` times on every instance through `solver`
/// and cross-checks the results. Pairs failing a precondition are skipped.
/// Instances are processed concurrently; rows come back sorted.
pub fn run_bench<F>(corpus: &[BenchInstance], algorithms: &[Algorithm], repeat: usize, solver: F) -> BenchReport
where
    F: Fn(&Instance, Algorithm, &SolveOptions) -> Result<SolveOutcome> + Sync,
{
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = corpus.get(i) else { break };
                let report = bench_one(entry, algorithms, repeat.max(1), &solver);
                results.lock().expect("no worker panics while holding the lock").push((i, report));
            });
        }
    });
    let mut parts = results.into_inner().expect("workers finished");
    parts.sort_by_key(|(i, _)| *i);
    let mut report = BenchReport::default();
    for (_, part) in parts {
        report.rows.extend(part.rows);
        report.skipped.extend(part.skipped);
        report.issues.extend(part.issues);
    }
    report.rows.sort_by(|a, b| (&a.instance, a.algorithm.name()).cmp(&(&b.instance, b.algorithm.name())));
    report
}

fn bench_one<F>(entry: &BenchInstance, algorithms: &[Algorithm], repeat: usize, solver: &F) -> BenchReport
where
    F: Fn(&Instance, Algorithm, &SolveOptions) -> Result<SolveOutcome>,
{
    let mut report = BenchReport::default();
    for &algorithm in algorithms {
        let mut best: Option<SolveOutcome> = None;
        let mut error = None;
        for _ in 0..repeat {
            match solver(&entry.instance, algorithm, &entry.options) {
                Ok(out) => {
                    let faster = best.as_ref().is_none_or(|b| out.stats.micros < b.stats.micros);
                    if faster {
                        best = Some(out);
                    }
                }
                Err(e) => {
                    error = Some(e);
                    break;
                }
            }
        }
        match (error, best) {
            (Some(Error::Precondition { reason, .. }), _) => report.skipped.push((entry.name.clone(), algorithm, reason)),
            (Some(e), _) => report.issues.push(Issue::Failed {
                instance: entry.name.clone(),
                algorithm,
                message: e.to_string(),
            }),
            (None, Some(out)) => {
                let row = BenchRow {
                    instance: entry.name.clone(),
                    algorithm,
                    feasible: out.feasible,
                    cost: out.optimal_cost,
                    param: out.stats.param(),
                    states: out.stats.states,
                    micros: out.stats.micros,
                    witness: out.witness,
                };
                let valid = match &row.witness {
                    Some(w) => entry.instance.verify(w) && entry.instance.shift_cost(w).ok() == row.cost,
                    None => !row.feasible,
                };
                if !valid {
                    report.issues.push(Issue::InvalidWitness(row.clone()));
                }
                if let Some(reference) = report.rows.first() {
                    if (reference.feasible, reference.cost) != (row.feasible, row.cost) {
                        report.issues.push(Issue::Disagreement {
                            reference: reference.clone(),
                            other: row.clone(),
                        });
                    }
                }
                report.rows.push(row);
            }
            (None, None) => unreachable!("repeat is at least 1"),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorConfig, InstanceClass};
    use crate::solve::solve;

    fn corpus(class: InstanceClass, count: u64) -> Vec<BenchInstance> {
        (0..count)
            .map(|seed| BenchInstance {
                name: format!("{class}-{seed:02}"),
                instance: generate(&GeneratorConfig::new(class, 6), seed).unwrap(),
                options: SolveOptions::default(),
            })
            .collect()
    }

    #[test]
    fn path_and_oracle_agree() {
        let report = run_bench(&corpus(InstanceClass::Path, 10), &[Algorithm::Path, Algorithm::Oracle], 1, solve);
        assert!(report.is_consistent(), "{:?}", report.issues);
        assert_eq!(report.rows.len(), 20);
        assert!(report.to_csv().starts_with("instance,algorithm,feasible,cost,param,states,micros\n"));
        assert_eq!(report.to_csv().lines().count(), 21);
    }

    #[test]
    fn empty_corpus() {
        let report = run_bench(&[], &[Algorithm::Oracle], 1, solve);
        assert!(report.is_consistent());
        assert!(report.rows.is_empty());
    }

    #[test]
    fn wrong_cost_stub_is_caught() {
        let stub = |inst: &Instance, algo: Algorithm, opts: &SolveOptions| {
            let mut out = solve(inst, Algorithm::Oracle, opts)?;
            if algo == Algorithm::Path && out.feasible {
                out.optimal_cost = out.optimal_cost.map(|c| c + 1);
                out.algorithm = algo;
            }
            Ok(out)
        };
        let mut entries = corpus(InstanceClass::Path, 10);
        for e in &mut entries {
            e.instance = e.instance.clone().with_budget(5);
        }
        let report = run_bench(&entries, &[Algorithm::Oracle, Algorithm::Path], 1, stub);
        assert!(!report.is_consistent());
        assert!(report.issues.iter().any(|i| matches!(i, Issue::Disagreement { .. })));
    }

    #[test]
    fn inapplicable_pairs_are_skipped() {
        let report = run_bench(&corpus(InstanceClass::Path, 2), &[Algorithm::Oracle, Algorithm::Cluster], 2, solve);
        assert!(report.is_consistent());
        assert_eq!(report.skipped.len(), 2);
        assert_eq!(report.rows.len(), 2);
    }
}
