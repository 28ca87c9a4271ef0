use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stochcover::report::{ResultBlock, SolveReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochcover")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> SolveReport {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = SolveReport::from_json(&text).unwrap();
    assert_eq!(parsed.to_json(), text);
    parsed
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const PATH3: &str = r#"{"type":"tree","vertices":[{"id":0,"p":1},{"id":1,"p":1},{"id":2,"p":1}],
  "edges":[{"u":0,"v":1,"w":1},{"u":1,"v":2,"w":1}]}"#;

#[test]
fn nonadaptive_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", PATH3);
    let r = report(&["solve-kcenter", "--instance", p.to_str().unwrap(), "--mode", "nonadaptive", "--k", "1", "--rho", "0.01"]);
    let ResultBlock::Nonadaptive { radius, centers, success_probability, .. } = r.result else { panic!() };
    assert_eq!((radius, centers, success_probability), (1.0, vec![1], 1.0));
    assert!(!r.trace.is_empty());
    assert_eq!(r.instance_sha256.unwrap().len(), 64);
}

#[test]
fn adaptive_boundary_and_single_radius() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "v.json", r#"{"type":"tree","vertices":[{"id":0,"p":0.5}],"edges":[]}"#);
    let p = p.to_str().unwrap();
    let r = report(&["solve-kcenter", "--instance", p, "--mode", "adaptive", "--k", "0", "--rho", "0.5"]);
    let ResultBlock::Adaptive { radius, failure_probability, .. } = r.result else { panic!() };
    assert_eq!((radius, failure_probability), (0.0, 0.5));
    let r = report(&["solve-kcenter", "--instance", p, "--mode", "adaptive", "--k", "1", "--radius", "0"]);
    let ResultBlock::Adaptive { failure_probability, rho, .. } = r.result else { panic!() };
    assert_eq!((failure_probability, rho), (0.0, None));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", PATH3);
    let p = p.to_str().unwrap();
    let missing_k = run(&["solve-kcenter", "--instance", p, "--mode", "nonadaptive", "--rho", "0.1"]);
    assert_eq!(missing_k.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing_k.stderr).contains("Usage"));
    assert_eq!(run(&["solve-setcover", "--instance", p, "--rho", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--suite", "nonadaptive", "--sizes", "", "--k", "5"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"type":"tree","vertices":[{"id":0,"p":1.5}],"edges":[]}"#);
    assert_eq!(run(&["solve-kcenter", "--instance", bad.to_str().unwrap(), "--mode", "adaptive", "--k", "1", "--rho", "0.1"]).status.code(), Some(3));
    assert_eq!(run(&["solve-setcover", "--instance", p, "--rho", "0.1"]).status.code(), Some(3));
    // three certain vertices at distance 1 cannot all be covered with r = 0 by one center
    assert_eq!(run(&["solve-kcenter", "--instance", p, "--mode", "nonadaptive", "--k", "0", "--rho", "0.5"]).status.code(), Some(4));
    let gen = run(&["gen", "--type", "tree", "--n", "20", "--seed", "1"]);
    let t20 = write(dir.path(), "t20.json", std::str::from_utf8(&gen.stdout).unwrap());
    assert_eq!(run(&["verify", "--instance", t20.to_str().unwrap(), "--mode", "adaptive"]).status.code(), Some(5));
}

#[test]
fn setcover_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", r#"{"type":"setcover","elements":[{"id":0,"p":0.1},{"id":1,"p":0.2}],
        "sets":[{"id":0,"cost":1,"members":[0,1]}]}"#);
    let r = report(&["solve-setcover", "--instance", p.to_str().unwrap(), "--rho", "0.05"]);
    let ResultBlock::Setcover { cost, chosen, .. } = r.result else { panic!() };
    assert_eq!((cost, chosen), (1.0, vec![0]));

    let gen = run(&["gen", "--type", "setcover", "--n", "9", "--m", "10", "--seed", "4", "--p-high", "0.9"]);
    let p = write(dir.path(), "s10.json", std::str::from_utf8(&gen.stdout).unwrap());
    let r = report(&["solve-setcover", "--instance", p.to_str().unwrap(), "--rho", "0.2", "--oracle"]);
    let ResultBlock::Setcover { oracle: Some(o), violation, .. } = r.result else { panic!() };
    assert!(o.ratio <= o.ratio_bound && violation <= 0.2 + 1e-12);
}

#[test]
fn verify_modes() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["gen", "--type", "tree", "--n", "8", "--seed", "42"]);
    let t = write(dir.path(), "t.json", std::str::from_utf8(&gen.stdout).unwrap());
    let t = t.to_str().unwrap();
    for mode in ["nonadaptive", "adaptive"] {
        let r = report(&["verify", "--instance", t, "--mode", mode, "--k", "2"]);
        let ResultBlock::Verify { max_abs_diff, rows, .. } = r.result else { panic!() };
        assert!(max_abs_diff <= 1e-9 && !rows.is_empty());
    }
    let r = report(&["verify", "--instance", t, "--mode", "adaptive", "--k", "2", "--samples", "20000", "--seed", "1"]);
    let ResultBlock::Verify { monte_carlo: Some(mc), .. } = r.result else { panic!() };
    assert_eq!(mc.samples, 20_000);

    let k3 = write(dir.path(), "k3.json", r#"{"type":"graph","vertices":[{"id":0,"p":0.5},{"id":1,"p":0.5},{"id":2,"p":0.5}],
        "edges":[{"u":0,"v":1},{"u":1,"v":2},{"u":0,"v":2}]}"#);
    let r = report(&["verify", "--instance", k3.to_str().unwrap(), "--mode", "hardness"]);
    let ResultBlock::Hardness { independent_sets, holds, m, .. } = r.result else { panic!() };
    assert_eq!((independent_sets, holds, m), (3, true, 1));
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--type", "tree", "--n", "8", "--seed", "42"]).stdout;
    let b = run(&["gen", "--type", "tree", "--n", "8", "--seed", "42"]).stdout;
    let c = run(&["gen", "--type", "tree", "--n", "8", "--seed", "43"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    let g = run(&["gen", "--type", "graph", "--n", "6", "--seed", "1", "--p-low", "0.5"]);
    assert_eq!(g.status.code(), Some(0));
}

#[test]
fn bench_suites() {
    let r = report(&["bench", "--suite", "adaptive", "--sizes", "8,12,16", "--k", "3"]);
    let ResultBlock::Bench { cells, .. } = r.result else { panic!() };
    assert_eq!(cells.len(), 3);
    let r = report(&["bench", "--suite", "nonadaptive", "--sizes", "20,40", "--k", "2,3", "--seed", "3"]);
    let ResultBlock::Bench { cells, growth_exponent, .. } = r.result else { panic!() };
    assert_eq!(cells.len(), 4);
    assert!(growth_exponent.is_some());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", PATH3);
    let out = dir.path().join("r.json");
    let o = run(&["solve-kcenter", "--instance", p.to_str().unwrap(), "--mode", "adaptive", "--k", "1", "--rho", "0.5",
        "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    SolveReport::from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
}
