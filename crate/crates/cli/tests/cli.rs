use std::path::Path;
use std::process::{Command, Output};

fn varmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varmax")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn in_process(args: &[&str]) -> (i32, String) {
    let mut buf = Vec::new();
    let argv = std::iter::once("varmax").chain(args.iter().copied());
    let code = varmax_cli::run(argv, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

/// The table without its provenance comment lines.
fn table(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

#[test]
fn complete_graph_constant() {
    let o = varmax(&["constant", "--graph", "K5", "--p", "1", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("constant 4/5 [exact]"), "{}", stdout(&o));
}

#[test]
fn four_vertex_survey_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let json = dir.path().join("s.json");
    let (code, out) =
        in_process(&["survey", "--n", "4", "--p", "1", "--exact", "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("6 graphs: 3/4 x6"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# command: survey\n"));
    assert!(text.contains("# version: varmax-v"));
    let t = table(&csv);
    let rows: Vec<&str> = t.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.split(',').nth(4) == Some("3/4")), "{t}");

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["run"]["command"], "survey");
    assert_eq!(doc["result"].as_array().unwrap().len(), 6);
    assert_eq!(doc["result"][0]["value"], "3/4");
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    assert_eq!(in_process(&["--threads", "1", "survey", "--n", "5", "--csv", a.to_str().unwrap()]).0, 0);
    assert_eq!(in_process(&["--threads", "4", "survey", "--n", "5", "--csv", b.to_str().unwrap()]).0, 0);
    assert_eq!(table(&a), table(&b));
    // Numeric mode is seeded, so it is reproducible too.
    assert_eq!(in_process(&["survey", "--n", "4", "--p", "2", "--seed", "3", "--csv", c.to_str().unwrap()]).0, 0);
    let d = dir.path().join("d.csv");
    assert_eq!(in_process(&["--threads", "2", "survey", "--n", "4", "--p", "2", "--seed", "3", "--csv", d.to_str().unwrap()]).0, 0);
    assert_eq!(table(&c), table(&d));
}

#[test]
fn paths_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let (code, out) = in_process(&["paths", "--max-n", "6", "--exact", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    for (n, v) in [(3, "2/3"), (4, "3/4"), (5, "4/5"), (6, "5/6")] {
        assert!(out.contains(&format!("P{n} {v} [exact]")), "{out}");
    }
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<circle").count(), 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(varmax(&["bogus"]).status.code(), Some(2));
    assert_eq!(varmax(&["constant"]).status.code(), Some(2));
    assert_eq!(varmax(&["constant", "--graph", "K4", "--p", "2", "--exact"]).status.code(), Some(2));
    assert_eq!(varmax(&["constant", "--graph", "Q9"]).status.code(), Some(2));
    assert_eq!(varmax(&["constant", "--graph", "K4", "--p", "-1"]).status.code(), Some(2));
    assert_eq!(varmax(&["--threads", "0", "graph6", "K3"]).status.code(), Some(2));
    assert_eq!(varmax(&["--help"]).status.code(), Some(0));
}

#[test]
fn computational_errors_exit_one() {
    let o = varmax(&["construction-search", "--p", "2", "--target", "5", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    // The exact search refuses graphs above its size limit.
    assert_eq!(varmax(&["constant", "--graph", "P9", "--exact"]).status.code(), Some(1));
    assert_eq!(varmax(&["constant", "--graph", "P8", "--exact", "--size-limit", "8"]).status.code(), Some(2));
}

#[test]
fn failed_writes_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("x.csv");
    let o = varmax(&["constant", "--graph", "K3", "--csv", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!bad.exists());
}

#[test]
fn construction_and_budget_override() {
    let dir = tempfile::tempdir().unwrap();
    let g6 = dir.path().join("t.g6");
    let (code, out) = in_process(&["construction", "--k", "2", "--m", "1", "--p", "1", "--emit-graph6", g6.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("levels=[1, 2, 5]"));
    let code6 = std::fs::read_to_string(&g6).unwrap();
    let (c2, out2) = in_process(&["graph6", code6.trim()]);
    assert_eq!(c2, 0);
    assert!(out2.contains("connected=true"));

    let o = Command::new(env!("CARGO_BIN_EXE_varmax"))
        .args(["construction", "--k", "2", "--m", "1", "--emit-graph6", dir.path().join("u.g6").to_str().unwrap()])
        .env("VARMAX_BUDGET_VERTICES", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let o = Command::new(env!("CARGO_BIN_EXE_varmax"))
        .args(["construction-search", "--p", "1", "--target", "1"])
        .env("VARMAX_BUDGET_VERTICES", "nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 11\nrestarts = 2\nthreads = 2\n").unwrap();
    let json = dir.path().join("k.json");
    let (code, _) = in_process(&["--config", cfg.to_str().unwrap(), "constant", "--graph", "K4", "--p", "2", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["run"]["seed"], 11);

    std::fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(in_process(&["--config", cfg.to_str().unwrap(), "graph6", "K3"]).0, 2);
}

#[test]
fn inequality_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("i.json");
    let (code, out) = in_process(&["verify-inequalities", "--sweep-size", "5000", "--seed", "2", "--report", rep.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(doc["run"]["seed"], 2);
    let sweeps = doc["result"]["sweeps"].as_array().unwrap();
    assert!(sweeps.iter().all(|s| s["passed"] == true));
    assert!(sweeps.iter().any(|s| s["name"] == "proposition" && s["trials"] == 5000));
}

#[test]
fn small_tools() {
    let (code, out) = in_process(&["enumerate", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);

    let (code, out) = in_process(&["maximal", "--graph", "C4", "--f", "1/2,0,0,0"]);
    assert_eq!(code, 0);
    assert!(out.contains("ratio = 3/4"), "{out}");
    assert_eq!(in_process(&["maximal", "--graph", "C4", "--f", "1,0"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("a.lp");
    std::fs::write(&lp, "vars 2\nmaximize 1 1\n1 2 <= 4\n3 1 <= 6\n").unwrap();
    let (code, out) = in_process(&["lp", lp.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("optimal 14/5"), "{out}");
    let (code, out) = in_process(&["lp", lp.to_str().unwrap(), "--vertices"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("4 vertices, 0 rays"), "{out}");
}

#[test]
fn quick_reproduction_run() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let (code, out) = in_process(&["reproduce", "--skip-slow", "--sweep-size", "2000", "--report", rep.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("SKIP")).collect();
    assert_eq!(lines.len(), 10, "{out}");
    assert!(out.contains("SKIP A4"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(doc["result"]["criteria"].as_array().unwrap().len(), 10);
}
