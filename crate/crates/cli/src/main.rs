//! `sbon`: solve, verify, generate, reduce and benchmark shift bribery
//! instances stored as JSON files.
//!
//! Exit codes: 0 feasible / verified / consistent, 1 infeasible / rejected /
//! disagreement, 2 error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use sbon_core::bench::{run_bench, BenchInstance, BenchReport};
use sbon_core::election::{majority_quota, Rule, ShiftVector, Winner};
use sbon_core::format::{parse_decomposition, InstanceDocument};
use sbon_core::generate::{generate, CostKind, GeneratorConfig};
use sbon_core::reductions::{
    reduce_ds_to_sbon_complete, reduce_ds_to_sbon_general, reduce_ktds_to_sbon, reduce_setcover_to_sbon_bipartite,
    ReductionRecord,
};
use sbon_core::solve::{algorithm_for, solve, SolveOptions, DEFAULT_ORACLE_GUARD};
use sbon_core::{detect_class, solve_auto, Algorithm, Graph, SolveOutcome};

#[derive(Parser)]
#[command(name = "sbon", version, about = "Exact shift bribery over influence networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a minimum-cost bribery for an instance file.
    Solve {
        instance: PathBuf,
        /// auto, oracle, complete-majority, complete-plurality, tournament,
        /// cluster, path, treewidth, fvs, cvd or partial-dom.
        #[arg(long, default_value = "auto")]
        algo: String,
        /// Tree decomposition file for the treewidth solver.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        /// Largest n*(m-1) the oracle accepts.
        #[arg(long, default_value_t = DEFAULT_ORACLE_GUARD)]
        oracle_guard: u64,
        /// Largest set size tried by partial-dom.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Check a shift vector against an instance.
    Verify {
        instance: PathBuf,
        /// Comma-separated direct shifts, one per voter.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        shifts: Vec<usize>,
    },
    /// Write a random instance of a network class.
    Generate {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        supporter_frac: f64,
        /// identity or linear (coefficients 1..=3).
        #[arg(long, default_value = "identity")]
        cost: String,
        /// Number of candidates.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = RuleArg::Majority)]
        rule: RuleArg,
        /// Budget; drawn from 0..=5 when omitted.
        #[arg(long)]
        budget: Option<u64>,
        /// Width bound for --class treewidth.
        #[arg(long, default_value_t = 2)]
        width: usize,
        /// Planted deletion set size for --class fvs and cvd.
        #[arg(long, default_value_t = 2)]
        deletion: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build a bribery instance from a dominating set or set cover instance.
    Reduce {
        #[arg(long, value_enum)]
        from: Source,
        /// Graph file {"n": .., "edges": [[u, v], ..]} or set system file
        /// {"universe": n, "sets": [[e, ..], ..]} with 0-based elements.
        source: PathBuf,
        #[arg(long)]
        k: usize,
        /// Supporter threshold for ktds; defaults to a strict majority.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run several solvers over a directory of instance files and compare.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', default_value = "auto,oracle")]
        algos: Vec<String>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Also write the CSV report here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_GUARD)]
        oracle_guard: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Majority,
    Plurality,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Ds,
    DsComplete,
    Setcover,
    SetcoverDirected,
    Ktds,
}

/// Algorithm choice where `auto` means class-based dispatch.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Auto,
    Fixed(Algorithm),
}

fn parse_choice(s: &str) -> Result<Choice> {
    if s == "auto" {
        return Ok(Choice::Auto);
    }
    Ok(Choice::Fixed(s.parse()?))
}

fn run_choice(choice: Choice, instance: &sbon_core::Instance, options: &SolveOptions) -> sbon_core::Result<SolveOutcome> {
    match choice {
        Choice::Auto => solve_auto(instance, options),
        Choice::Fixed(a) => solve(instance, a, options),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve {
            instance,
            algo,
            decomposition,
            oracle_guard,
            k_max,
        } => cmd_solve(&instance, &algo, decomposition.as_deref(), oracle_guard, k_max),
        Command::Verify { instance, shifts } => cmd_verify(&instance, shifts),
        Command::Generate {
            class,
            n,
            seed,
            supporter_frac,
            cost,
            m,
            rule,
            budget,
            width,
            deletion,
            out,
        } => {
            let mut cfg = GeneratorConfig::new(class.parse()?, n);
            cfg.supporter_frac = supporter_frac;
            cfg.cost = cost.parse::<CostKind>()?;
            cfg.num_candidates = m;
            cfg.rule = match rule {
                RuleArg::Majority => Rule::Majority,
                RuleArg::Plurality => Rule::Plurality,
            };
            cfg.budget = budget;
            cfg.width = width;
            cfg.deletion = deletion;
            let inst = generate(&cfg, seed)?;
            emit(&InstanceDocument::from_instance(&inst).to_json(), out.as_deref())?;
            Ok(0)
        }
        Command::Reduce {
            from,
            source,
            k,
            t,
            out,
        } => {
            let record = cmd_reduce(from, &source, k, t)?;
            emit(&InstanceDocument::from_record(&record).to_json(), out.as_deref())?;
            Ok(0)
        }
        Command::Bench {
            corpus,
            algos,
            repeat,
            csv,
            oracle_guard,
        } => cmd_bench(&corpus, &algos, repeat, csv.as_deref(), oracle_guard),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(InstanceDocument, sbon_core::Instance)> {
    let doc = InstanceDocument::load(path)?;
    let inst = doc.to_instance().with_context(|| format!("loading {}", path.display()))?;
    Ok((doc, inst))
}

fn winner_name(w: Winner) -> String {
    match w {
        Winner::Candidate(c) => format!("candidate {c}"),
        Winner::NoMajority => "no majority".into(),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_solve(path: &Path, algo: &str, dec_path: Option<&Path>, oracle_guard: u64, k_max: Option<usize>) -> Result<u8> {
    let (doc, inst) = load(path)?;
    let choice = parse_choice(algo)?;
    let decomposition = match dec_path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let dec = parse_decomposition(&text)?;
            dec.validate(&inst.network().support_graph())?;
            Some(dec)
        }
        None => doc.decomposition()?,
    };
    let options = SolveOptions {
        decomposition,
        oracle_guard: Some(oracle_guard),
        k_max,
    };
    let class = detect_class(&inst);
    let out = run_choice(choice, &inst, &options)?;
    if choice == Choice::Auto {
        println!("class: {class} (dispatch {})", algorithm_for(&inst, class));
    }
    println!("algorithm: {}", out.algorithm);
    println!("feasible: {}", out.feasible);
    match (&out.optimal_cost, &out.witness) {
        (Some(c), Some(w)) => {
            println!("cost: {c}");
            println!("witness: {}", join(&w.0));
        }
        _ => println!("cost: -"),
    }
    let s = &out.stats;
    let param = s.param();
    println!(
        "stats: states={} branches={}{}{} micros={}",
        s.states,
        s.branches,
        if param.is_empty() { "" } else { " " },
        param,
        s.micros
    );
    Ok(if out.feasible { 0 } else { 1 })
}

fn cmd_verify(path: &Path, shifts: Vec<usize>) -> Result<u8> {
    let (_, inst) = load(path)?;
    let s = ShiftVector(shifts);
    let eval = inst.evaluate(&s)?;
    println!("cost: {} (budget {})", eval.cost, inst.budget());
    println!("effective shifts: {}", join(&eval.effective));
    println!("winner: {}", winner_name(eval.winner));
    println!("supporters: {}", eval.supporters);
    if let Some(t) = inst.supporter_threshold() {
        println!("threshold mode: needs {t} supporters");
    }
    if !eval.within_budget {
        println!("rejected: budget exceeded");
        return Ok(1);
    }
    if !eval.preferred_wins {
        println!("rejected: candidate {} does not win", inst.preferred());
        return Ok(1);
    }
    println!("verified");
    Ok(0)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .with_context(|| format!("missing non-negative integer field '{key}'"))
}

fn lists_field(v: &Value, key: &str) -> Result<Vec<Vec<usize>>> {
    serde_json::from_value(v.get(key).cloned().with_context(|| format!("missing field '{key}'"))?)
        .with_context(|| format!("field '{key}' must be a list of index lists"))
}

fn read_graph(v: &Value) -> Result<Graph> {
    let n = usize_field(v, "n")?;
    let mut edges = Vec::new();
    for e in lists_field(v, "edges")? {
        let [u, w] = e[..] else { bail!("edge {e:?} must have two endpoints") };
        if u >= n || w >= n || u == w {
            bail!("edge {e:?} is not a valid edge on {n} vertices");
        }
        edges.push((u, w));
    }
    Ok(Graph::from_edges(n, &edges))
}

fn cmd_reduce(from: Source, path: &Path, k: usize, t: Option<usize>) -> Result<ReductionRecord> {
    let v = read_json(path)?;
    if t.is_some() && from != Source::Ktds {
        bail!("--t only applies to --from ktds");
    }
    let record = match from {
        Source::Ds => reduce_ds_to_sbon_general(&read_graph(&v)?, k)?,
        Source::DsComplete => reduce_ds_to_sbon_complete(&read_graph(&v)?, k)?,
        Source::Setcover | Source::SetcoverDirected => reduce_setcover_to_sbon_bipartite(
            usize_field(&v, "universe")?,
            &lists_field(&v, "sets")?,
            k,
            from == Source::SetcoverDirected,
        )?,
        Source::Ktds => {
            let g = read_graph(&v)?;
            let t = t.unwrap_or_else(|| majority_quota(g.num_vertices()));
            reduce_ktds_to_sbon(&g, k, t)?
        }
    };
    Ok(record)
}

fn cmd_bench(corpus: &Path, algos: &[String], repeat: usize, csv: Option<&Path>, oracle_guard: u64) -> Result<u8> {
    let choices: Vec<(String, Choice)> = algos
        .iter()
        .map(|a| Ok((a.clone(), parse_choice(a)?)))
        .collect::<Result<_>>()?;
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus)
        .with_context(|| format!("reading {}", corpus.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    let mut entries = Vec::with_capacity(paths.len());
    for p in &paths {
        let (doc, instance) = load(p)?;
        entries.push(BenchInstance {
            name: p.file_name().map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into_owned()),
            instance,
            options: SolveOptions {
                decomposition: doc.decomposition()?,
                oracle_guard: Some(oracle_guard),
                k_max: None,
            },
        });
    }
    let mut report = BenchReport::default();
    for entry in &entries {
        // `auto` stands for the algorithm the instance's class dispatches to.
        let mut algorithms: Vec<Algorithm> = Vec::new();
        for (_, c) in &choices {
            let a = match c {
                Choice::Auto => algorithm_for(&entry.instance, detect_class(&entry.instance)),
                Choice::Fixed(a) => *a,
            };
            if !algorithms.contains(&a) {
                algorithms.push(a);
            }
        }
        let part = run_bench(std::slice::from_ref(entry), &algorithms, repeat, solve);
        report.rows.extend(part.rows);
        report.skipped.extend(part.skipped);
        report.issues.extend(part.issues);
    }
    print!("{}", report.to_table());
    println!("{}", report.summary());
    for (name, algo, reason) in &report.skipped {
        println!("skipped {name} {algo}: {reason}");
    }
    for issue in &report.issues {
        eprintln!("{}", issue.describe());
    }
    if let Some(path) = csv {
        std::fs::write(path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.is_consistent() { 0 } else { 1 })
}
