use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn triadnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triadnet")).args(args).env_remove("TRIADNET_WORKERS").output().expect("runs")
}

fn ok(args: &[&str]) -> String {
    let out = triadnet(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const GRAPH: &str = "a b\nb c\na c\nc d\nd a\nd e\ne b\nb d\nf a\ne f\nf c\n";

#[test]
fn motifs_are_deterministic_and_leave_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.tsv", GRAPH);
    let (o1, o2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for o in [&o1, &o2] {
        ok(&["motifs", &input, "--seed", "7", "--instances", "50", "--steps-per-edge", "10", "--out", o.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&o1).unwrap(), std::fs::read(&o2).unwrap());
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("a.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "motifs");
    assert_eq!(m["seed"], 7);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&o1).unwrap()).unwrap();
    assert_eq!(v["z"].as_array().unwrap().len(), 13);
    // a different seed changes the ensemble
    let other = ok(&["motifs", &input, "--seed", "8", "--instances", "50", "--steps-per-edge", "10"]);
    assert_ne!(other.as_bytes(), std::fs::read(&o1).unwrap().as_slice());
}

#[test]
fn inadmissible_order_suggests_nearest() {
    let out = triadnet(&["trgm", "--order", "48", "--er", "0.1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("49"));
    let out = triadnet(&["--error-json", "trgm", "--order", "48", "--er", "0.1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "Inadmissible");
}

#[test]
fn sts_output_validates_through_a_pipe() {
    let triples = ok(&["sts", "--order", "63"]);
    assert_eq!(triples.lines().count(), 63 * 62 / 6);
    let mut child = Command::new(env!("CARGO_BIN_EXE_triadnet"))
        .args(["sts", "--validate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(triples.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok"));
    let dir = tempfile::tempdir().unwrap();
    let broken: String = triples.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let bad = write(dir.path(), "bad.txt", &broken);
    assert!(!triadnet(&["sts", "--validate", &bad]).status.success());
}

#[test]
fn trgm_graphs_and_degree_law() {
    let dir = tempfile::tempdir().unwrap();
    let counts = write(dir.path(), "c.txt", "357 2 0 1 1 0 1 30 0 0 0 0 0 0 0 0\n");
    let g = ok(&["trgm", "--order", "49", "--counts", &counts, "--seed", "3"]);
    assert_eq!(g.lines().count(), 98);
    assert_eq!(g, ok(&["trgm", "--order", "49", "--counts", &counts, "--seed", "3"]));
    let d = ok(&["trgm", "--order", "49", "--counts", &counts, "--degree-dist"]);
    let total: f64 = d.lines().skip(2).map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-10);
    let wrong = write(dir.path(), "w.txt", "1 2 3\n");
    assert!(!triadnet(&["trgm", "--order", "49", "--counts", &wrong]).status.success());
}

#[test]
fn env_workers_override_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.tsv", GRAPH);
    let args = ["motifs", &input, "--instances", "20", "--steps-per-edge", "5", "--workers", "3"];
    let a = ok(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_triadnet")).args(args).env("TRIADNET_WORKERS", "1").output().unwrap();
    assert!(out.status.success());
    assert_eq!(a.as_bytes(), out.stdout.as_slice());
    let out = Command::new(env!("CARGO_BIN_EXE_triadnet")).args(args).env("TRIADNET_WORKERS", "many").output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn analysis_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.tsv", GRAPH);
    let census = ok(&["census", &input]);
    let total: u64 = census.lines().skip(2).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 20);
    let stats: serde_json::Value = serde_json::from_str(&ok(&["stats", &input])).unwrap();
    assert_eq!(stats["arcs"], 11);
    let r = ok(&["randomize", &input, "--seed", "2"]);
    assert_eq!(r.lines().count(), 11);
    let n = ok(&["nospam", &input, "--instances", "20", "--steps-per-edge", "5"]);
    assert_eq!(n.lines().count(), 2 + 6);
    assert_eq!(n.lines().nth(1).unwrap().split(',').count(), 2 + 30 + 1);
    let m = ok(&["nospam", &input, "--instances", "20", "--steps-per-edge", "5", "--mapped"]);
    assert_eq!(m.lines().nth(1).unwrap().split(',').count(), 2 + 13);
    let c = ok(&["nospam", &input, "--instances", "20", "--steps-per-edge", "5", "--cluster", "2"]);
    assert_eq!(c.lines().count(), 2 + 6);
    let d = ok(&["dynamics", &input, "--theta-grid", "4", "--repeats", "2", "--steps", "500", "--transient", "10"]);
    assert_eq!(d.lines().nth(1).unwrap(), "theta,output,output_se,corr,corr_se");
    assert_eq!(d.lines().count(), 2 + 4);
    let rem = ok(&["removal", &input, "--rank", "degree", "--k-max", "2"]);
    assert!(rem.lines().nth(2).unwrap().starts_with("0,,0,"));
    let profiles = write(dir.path(), "p.csv", "label,x,y\na,0,0\nb,0,1\nc,10,10\nd,10,11\n");
    let cl = ok(&["cluster", &profiles, "--k", "2"]);
    assert_eq!(cl.lines().skip(2).collect::<Vec<_>>(), vec!["a,0", "b,0", "c,1", "d,1"]);
    let from_nospam = ok(&["cluster", &write(dir.path(), "n.csv", &n), "--k", "2"]);
    assert_eq!(from_nospam.lines().count(), 2 + 6);
    let t: serde_json::Value = serde_json::from_str(&ok(&["patterns"])).unwrap();
    assert_eq!(t["patterns"].as_array().unwrap().len(), 16);
    assert_eq!(t["orbits"].as_array().unwrap().len(), 30);
    let s: serde_json::Value = serde_json::from_str(&ok(&["patterns", "--emit", "signed"])).unwrap();
    assert_eq!(s.as_array().unwrap().len(), 13);
}

#[test]
fn aggregate_signed_writes_signed_edges() {
    let dir = tempfile::tempdir().unwrap();
    let records = write(dir.path(), "r.txt", "1 USA CAN 3 1 0 0\n2 CAN USA 2 0 0 0\n3 USA MEX 0 4 0 1\n31 USA MEX 5 0 0 0\n");
    let out = ok(&["aggregate-signed", &records, "--month", "1"]);
    let mut lines: Vec<&str> = out.lines().collect();
    lines.sort_unstable();
    assert_eq!(lines, vec!["CAN USA 1", "MEX USA -1"]);
    assert_eq!(ok(&["aggregate-signed", &records, "--month", "2"]).trim(), "MEX USA 1");
    let registry = write(dir.path(), "c.txt", "USA\nCAN\n");
    assert!(!triadnet(&["aggregate-signed", &records, "--month", "1", "--countries", &registry]).status.success());
    // the output loads as a signed edge list
    let g = write(dir.path(), "g.txt", &out);
    ok(&["nospam", &g, "--signed", "--instances", "5", "--steps-per-edge", "2"]);
}
