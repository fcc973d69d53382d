use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rationality::harness::{load_results, run_experiment, ExperimentConfig};
use rationality::sim::load_tasks;

const BIN: &str = env!("CARGO_BIN_EXE_rationality");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn analyze_worked_example() {
    let o = run(&["analyze", fixture("dstar.csv").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("GARP violations: 2"));
    assert!(text.contains("CCEI: 0.6667"));
}

#[test]
fn analyze_json_bundle() {
    let o = run(&["analyze", "--json", fixture("dstar.csv").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["garp"]["garp_count"], 2);
    assert!((v["ccei"]["value"].as_f64().unwrap() - 2.0 / 3.0).abs() <= 1e-6);
    assert_eq!(v["series"]["values"].as_array().unwrap().len(), 2);

    let o = run(&["analyze", "--json", fixture("rational.csv").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["garp"]["garp_count"], 0);
    assert_eq!(v["ccei"]["value"], 1.0);
}

#[test]
fn analyze_at_lower_efficiency() {
    let o = run(&["analyze", "--efficiency", "0.6", fixture("dstar.csv").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("GARP violations: 0"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let o = run(&["analyze", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1"));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "round,p_A,p_B,budget,x_A,x_B\n1,-1,1,100,50,50\n").unwrap();
    let o = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));

    let o = run(&["analyze", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["gen-tasks", "--risk", "medium"]);
    assert_eq!(o.status.code(), Some(1));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "agents = []\n").unwrap();
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["report", dir.path().join("nothing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_tasks_is_seeded() {
    let a = run(&["gen-tasks", "--rounds", "25", "--budget", "100", "--risk", "high", "--seed", "11"]);
    let b = run(&["gen-tasks", "--rounds", "25", "--budget", "100", "--risk", "high", "--seed", "11"]);
    let c = run(&["gen-tasks", "--risk", "high", "--seed", "12"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let tasks = load_tasks(&a.stdout[..]).unwrap();
    assert_eq!(tasks.len(), 25);
    assert!(tasks.iter().all(|t| t.budget == 100.0 && t.prices.iter().all(|p| (0.2..=5.0).contains(p))));

    let low = load_tasks(&run(&["gen-tasks", "--risk", "low"]).stdout[..]).unwrap();
    assert!(low.iter().all(|t| t.prices.iter().all(|p| (0.9..=1.1).contains(p))));
}

fn small_config(dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("exp.toml");
    fs::write(
        &path,
        format!(
            r#"
master_seed = 3

[session]
rounds = 12
risk = "high"

[[agents]]
label = "econ"
kind = "ces_rational"
sessions = 4
ces = {{ share = 0.5, exponent = -1.0 }}

[[agents]]
label = "bio"
kind = "specialist"
sessions = 4
alpha = 1.0
{extra}
"#
        ),
    )
    .unwrap();
    path
}

#[test]
fn simulate_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = dir.path().join("run");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("published reference, not reproduced"));
    for f in ["results.json", "report.json", "report.csv", "report.txt", "datasets/econ/session_003.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }

    let table = run(&["report", out.to_str().unwrap()]);
    assert!(table.status.success());
    assert_eq!(table.stdout, fs::read(out.join("report.txt")).unwrap());

    let csv = run(&["report", out.to_str().unwrap(), "--format", "csv"]);
    let text = stdout(&csv);
    assert_eq!(text.lines().count(), 1 + 2 + 6);
    assert!(text.lines().next().unwrap().starts_with("subject,"));

    let json = run(&["report", out.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["rows"][0]["garp_violations"], 0);
    assert_eq!(v["rows"][0]["mean_ccei"], 1.0);
    assert_eq!(v["reference"][1]["subject"], "GPT");

    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "4", "--out", dir.path().join("run4").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(load_results(dir.path().join("run4")).unwrap().config.master_seed, 4);
}

#[test]
fn served_agent_matches_built_in() {
    let dir = tempfile::tempdir().unwrap();
    let extra = format!(
        r#"
[[agents]]
label = "remote econ"
kind = "external"
sessions = 4
external = {{ program = "{BIN}", args = ["serve-agent", "--kind", "ces-rational", "--share", "0.5", "--exponent", "-1.0"], timeout_ms = 10000 }}
"#
    );
    let cfg = ExperimentConfig::from_path(small_config(dir.path(), &extra)).unwrap();
    let res = run_experiment(&cfg).unwrap();
    let (local, remote) = (&res.agents[0], &res.agents[2]);
    assert_eq!(remote.failed(), 0, "{:?}", remote.sessions[0].failure);
    for (a, b) in local.sessions.iter().zip(&remote.sessions) {
        assert_eq!(a.metrics, b.metrics);
        assert_eq!(a.dataset.as_ref().unwrap().observations(), b.dataset.as_ref().unwrap().observations());
    }
}

#[test]
fn slow_or_broken_agents_fail_their_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let extra = r#"
[[agents]]
label = "sleeper"
kind = "external"
sessions = 2
external = { program = "sh", args = ["-c", "exec sleep 5"], timeout_ms = 200 }

[[agents]]
label = "babbler"
kind = "external"
sessions = 2
external = { program = "sh", args = ["-c", "while read line; do echo nonsense; done"], timeout_ms = 5000 }

[[agents]]
label = "spender"
kind = "external"
sessions = 1
external = { program = "sh", args = ["-c", "while read line; do echo '{\"choice\":[1000,1000]}'; done"], timeout_ms = 5000 }
"#;
    let cfg = small_config(dir.path(), extra);
    let out = dir.path().join("run");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let res = load_results(&out).unwrap();
    assert_eq!(res.provenance.total_failed_sessions, 5);
    let failure = |a: usize| res.agents[a].sessions[0].failure.clone().unwrap();
    assert!(failure(2).contains("no response within 200 ms"), "{}", failure(2));
    assert!(failure(3).contains("malformed"), "{}", failure(3));
    assert!(failure(4).contains("budget"), "{}", failure(4));
    let table = stdout(&o);
    assert!(table.contains("sleeper: all 2 sessions failed"));
    assert!(!table.lines().any(|l| l.starts_with("babbler ")));
}
