use ptlab_core::graph::count_triangles;
use ptlab_core::graph::io::{parse_digraph, parse_graph, write_graph};
use std::path::Path;
use std::process::{Command, Output};

fn ptlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptlab"))
        .env_remove("PTLAB_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn json(file: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap()
}

#[test]
fn rs_generation_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "rs.txt");
    let o = ptlab(&["gen", "rs", "--k", "5", "--ap", "exact", "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let g = parse_graph(&text).unwrap();
    assert_eq!(g.n(), 30);
    assert_eq!(write_graph(&g), text);
    let side = json(&format!("{out}.json"));
    assert_eq!(side["construction"], "rs");
    let tuples = side["packing"]["tuples"].as_array().unwrap();
    // {1, 2, 4, 5} is a largest progression-free subset of 1..=5
    assert_eq!(tuples.len(), 20);
    assert_eq!(count_triangles(&g), 20);
    assert!(side["farness"].as_f64().unwrap() > 0.0);
}

#[test]
fn gadgets_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let rs = path(dir.path(), "rs.txt");
    assert!(ptlab(&["gen", "rs", "--k", "4", "--out", &rs]).status.success());
    let c5 = path(dir.path(), "c5.txt");
    let o = ptlab(&["gen", "c5-gadget", "--from", &rs, "--out", &c5]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(parse_graph(&std::fs::read_to_string(&c5).unwrap()).unwrap().n(), 5 * 24);
    let poset = path(dir.path(), "poset.txt");
    assert!(ptlab(&["gen", "poset-gadget", "--k", "4", "--out", &poset]).status.success());
    let d = parse_digraph(&std::fs::read_to_string(&poset).unwrap()).unwrap();
    assert_eq!(d.n(), 24);

    let k4 = path(dir.path(), "k4.txt");
    std::fs::write(&k4, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let o = ptlab(&["gen", "c5-gadget", "--from", &k4]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not tripartite"));
}

#[test]
fn single_vertex_cograph() {
    let o = ptlab(&["gen", "cograph", "--n", "1"]);
    assert!(o.status.success());
    assert_eq!(parse_graph(&String::from_utf8(o.stdout).unwrap()).unwrap().n(), 1);
}

#[test]
fn seed_flag_and_env_agree() {
    let a = ptlab(&["--seed", "9", "gen", "gnp", "--n", "12"]).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_ptlab"))
        .env("PTLAB_SEED", "9")
        .args(["gen", "gnp", "--n", "12"])
        .output()
        .unwrap()
        .stdout;
    let c = ptlab(&["--seed", "10", "gen", "gnp", "--n", "12"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tester_reports_are_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let rs = path(dir.path(), "rs.txt");
    assert!(ptlab(&["gen", "rs", "--k", "6", "--out", &rs]).status.success());
    let args = [
        "test",
        rs.as_str(),
        "--tester",
        "universal",
        "--property",
        "triangle-free",
        "--budget",
        "8",
        "--trials",
        "300",
    ];
    let one = ptlab(&[&["--threads", "1"], &args[..]].concat()).stdout;
    let many = ptlab(&[&["--threads", "4"], &args[..]].concat()).stdout;
    assert_eq!(one, many);
    let r: serde_json::Value = serde_json::from_slice(&one).unwrap();
    let rate = r["rejection_rate"].as_f64().unwrap();
    assert!(r["wilson95"][0].as_f64().unwrap() <= rate && rate <= r["wilson95"][1].as_f64().unwrap());
}

#[test]
fn recognize_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    let p4 = path(dir.path(), "p4.txt");
    std::fs::write(&p4, "4 3\n0 1\n1 2\n2 3\n").unwrap();
    let r: serde_json::Value = serde_json::from_slice(&ptlab(&["recognize", &p4, "--property", "cograph"]).stdout).unwrap();
    assert_eq!(r["member"], false);
    let d: serde_json::Value = serde_json::from_slice(&ptlab(&["distance", &p4, "--property", "cograph"]).stdout).unwrap();
    assert_eq!(d["distance"], 1);
}

#[test]
fn verify_suite_passes() {
    let o = ptlab(&["verify-suite", "recognizers", "--seeds", "30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn exit_codes() {
    assert_eq!(ptlab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(ptlab(&["verify-suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(ptlab(&["recognize", "/nonexistent/graph.txt", "--property", "cograph"]).status.code(), Some(3));
    assert_eq!(ptlab(&["gen", "rs"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.txt");
    std::fs::write(&bad, "3 1\n0 0\n").unwrap();
    assert_eq!(ptlab(&["recognize", &bad, "--property", "cograph"]).status.code(), Some(2));
}

#[test]
fn pipeline_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "easy.csv");
    let o = ptlab(&["pipeline-easy", "--n", "16", "--flips", "0,8", "--ts", "1,8", "--trials", "40", "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("flips,"));
    assert_eq!(csv.lines().count(), 1 + 4);
    let report = json(&format!("{out}.json"));
    assert_eq!(report["schema_version"], "1");
    assert!(ptlab_core::harness::validate_report(&report).is_ok());
}
