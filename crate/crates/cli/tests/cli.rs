use std::process::{Command, Output};

fn k4graph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k4graph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_table_has_75_rows() {
    let o = k4graph(&["catalog", "--format", "table"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with('[')).count(), 75);
}

#[test]
fn catalog_json_round_trips() {
    let o = k4graph(&["catalog", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "k4graph/1");
    assert_eq!(v["entries"].as_array().unwrap().len(), 75);
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(k4graph(&["catalog", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(k4graph(&["build", "--graph", "k5"]).status.code(), Some(2));
    assert_eq!(
        k4graph(&["classify", "--vertex", "[S]", "--square", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        k4graph(&["classify", "--vertex", "[nope]", "--square", "6"]).status.code(),
        Some(2)
    );
}

#[test]
fn build_summaries() {
    let k3 = k4graph(&["build", "--graph", "k3", "--format", "dot"]);
    let k4 = k4graph(&["build", "--graph", "k4", "--format", "json"]);
    assert!(k3.status.success() && k4.status.success());
    assert!(stdout(&k3).starts_with("digraph k3 {"));
    let v: serde_json::Value = serde_json::from_slice(&k4.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 75);
    let s3 = String::from_utf8(k3.stderr).unwrap();
    let s4 = String::from_utf8(k4.stderr).unwrap();
    assert!(s3.starts_with("vertices=75 edges="), "{s3}");
    assert!(s3.trim_end().ends_with("irregular=[8S]_I"));
    assert!(s4.trim_end().ends_with("irregular=irr"));
}

#[test]
fn classify_prints_three_predicates() {
    let o = k4graph(&["classify", "--vertex", "[7S]", "--square", "-2", "--bound", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("odd: false search=none"), "{out}");
    assert!(out.contains("wu: true witness="));
    assert!(out.contains("even_non_wu: true witness="));
}

#[test]
fn verify_single_suite() {
    let o = k4graph(&["verify", "--suite", "catalog"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("catalog: pass"));
}

#[test]
fn budget_env_is_checked() {
    let o = Command::new(env!("CARGO_BIN_EXE_k4graph"))
        .args(["verify", "--suite", "lattice"])
        .env("K4GRAPH_SEARCH_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_k4graph"))
        .args(["classify", "--vertex", "[S]", "--square", "6", "--bound", "3"])
        .env("K4GRAPH_SEARCH_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("budget"));
}

#[test]
fn export_writes_all_files() {
    let dir = std::env::temp_dir().join(format!("k4graph-export-{}", std::process::id()));
    let o = k4graph(&["export", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    for f in ["catalog.json", "catalog.txt", "k3.json", "k3.dot", "k4.json", "k4.dot"] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}
