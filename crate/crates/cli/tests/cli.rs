use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn sbon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbon")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Voters 3 -> 2 -> 1 (0-based arcs 2->1, 1->0), nobody supports candidate 1.
const PATH3: &str = r#"{"num_candidates": 2, "preferred": 1, "rule": "majority",
  "voters": [{"ranking": [0, 1]}, {"ranking": [0, 1]}, {"ranking": [0, 1]}],
  "arcs": [{"from": 2, "to": 1, "weight": {"num": 1, "den": 1}},
           {"from": 1, "to": 0, "weight": {"num": 1, "den": 1}}],
  "budget": 1}"#;

const WON: &str = r#"{"num_candidates": 2, "preferred": 1, "rule": "majority",
  "voters": [{"ranking": [1, 0]}], "budget": 0}"#;

#[test]
fn version_and_help() {
    let out = sbon(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("sbon "));
    for sub in ["solve", "verify", "generate", "reduce", "bench"] {
        assert_eq!(code(&sbon(&[sub, "--help"])), 0, "{sub}");
    }
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let won = write(&dir, "won.json", WON);
    let out = sbon(&["solve", s(&won)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cost: 0"));

    let path = write(&dir, "path.json", PATH3);
    let out = sbon(&["solve", s(&path), "--algo", "path"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("witness: 0,0,1"));

    let broke = write(&dir, "broke.json", &PATH3.replace("\"budget\": 1", "\"budget\": 0"));
    assert_eq!(code(&sbon(&["solve", s(&broke)])), 1);

    let out = sbon(&["solve", s(&path), "--algo", "cluster"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));

    let bad = write(&dir, "bad.json", "{ not json");
    assert_eq!(code(&sbon(&["solve", s(&bad)])), 2);
    assert_eq!(code(&sbon(&["solve", s(&path), "--algo", "nope"])), 2);
}

#[test]
fn oracle_guard_is_enforced() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("big.json");
    let out = sbon(&["generate", "--class", "general", "--n", "30", "--seed", "1", "-o", s(&inst)]);
    assert_eq!(code(&out), 0);
    let out = sbon(&["solve", s(&inst), "--algo", "oracle"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let won = write(&dir, "won.json", WON);
    assert_eq!(code(&sbon(&["verify", s(&won), "--shifts", "0"])), 0);

    let path = write(&dir, "path.json", PATH3);
    let out = sbon(&["verify", s(&path), "--shifts", "0,0,1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("effective shifts: 0,1,1"));

    let out = sbon(&["verify", s(&path), "--shifts", "1,0,1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("budget exceeded"));

    assert_eq!(code(&sbon(&["verify", s(&path), "--shifts", "0,1"])), 2);
    assert_eq!(code(&sbon(&["verify", s(&path), "--shifts", "0,0,2"])), 2);
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(code(&sbon(&["generate", "--class", "path", "--n", "5", "--seed", "7", "-o", s(p)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = sbon(&["generate", "--class", "cluster", "--n", "9", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["voters"].as_array().unwrap().len(), 9);

    assert_eq!(code(&sbon(&["generate", "--class", "moebius", "--n", "4"])), 2);
    assert_eq!(code(&sbon(&["generate", "--class", "path", "--n", "4", "--supporter-frac", "2"])), 2);
}

#[test]
fn tournament_out_degrees() {
    let out = sbon(&["generate", "--class", "tournament", "--n", "6", "--seed", "11"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut deg = [0usize; 6];
    for a in doc["arcs"].as_array().unwrap() {
        deg[a["from"].as_u64().unwrap() as usize] += 1;
    }
    deg.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(deg, [5, 4, 3, 2, 1, 0]);
}

#[test]
fn reduce_examples() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.json", r#"{"n": 4, "edges": [[0, 1], [0, 2], [0, 3]]}"#);
    let red = dir.path().join("red.json");
    assert_eq!(code(&sbon(&["reduce", "--from", "ds", s(&star), "--k", "1", "-o", s(&red)])), 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&red).unwrap()).unwrap();
    assert_eq!(doc["voters"].as_array().unwrap().len(), 7);
    assert_eq!(doc["metadata"]["source"], "ds");
    let out = sbon(&["solve", s(&red)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cost: 1"));

    let sc = write(&dir, "sc.json", r#"{"universe": 2, "sets": [[0], [1]]}"#);
    let out = sbon(&["reduce", "--from", "setcover", s(&sc), "--k", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["voters"].as_array().unwrap().len(), 8);

    let out = sbon(&["reduce", "--from", "ktds", s(&star), "--k", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["metadata"]["supporter_threshold"], 3);

    let complete = sbon(&["reduce", "--from", "ds-complete", s(&star), "--k", "2"]);
    assert!(stdout(&complete).contains("\"den\": 4"));
    assert_eq!(code(&sbon(&["reduce", "--from", "ds-complete", s(&star), "--k", "0"])), 2);
}

#[test]
fn bench_agrees_and_writes_csv() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for seed in 0..10 {
        let p = corpus.join(format!("path-{seed:02}.json"));
        let out = sbon(&["generate", "--class", "path", "--n", "6", "--m", "3", "--seed", &seed.to_string(), "-o", s(&p)]);
        assert_eq!(code(&out), 0);
    }
    let csv = dir.path().join("report.csv");
    let out = sbon(&["bench", "--corpus", s(&corpus), "--algos", "path,oracle", "--csv", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,algorithm,feasible,cost,param,states,micros"));
    assert_eq!(lines.count(), 20);
    assert!(stdout(&out).contains("20 rows over 10 instances"));

    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert_eq!(code(&sbon(&["bench", "--corpus", s(&empty), "--algos", "oracle"])), 0);
}
