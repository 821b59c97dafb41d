use std::path::Path;
use std::process::{Command, Output};

const CONIC: &str = r#"[field]
p = 2
params = ["s0", "s1"]

[ambient]
blocks = [["x0", "x1", "x2"]]

[scheme]
generators = ["s0*x0^2 + s1*x1^2 + x2^2"]

[base_change]
raise = ["s0", "s1"]
"#;

const PRODUCT: &str = r#"[field]
p = 2
params = ["r", "s", "t"]

[ambient]
blocks = [["x", "y", "z"], ["u", "v", "w"]]

[scheme]
generators = ["s*x^2 + t*y^2 + z^2", "r*u^2 + s*v^2 + w^2"]

[base_change]
raise = ["s", "t"]
"#;

fn insep(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_insep")).args(args).current_dir(dir).output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_conic_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ex.toml"), CONIC).unwrap();
    let out = insep(&["analyze", "ex.toml", "--json", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&dir.path().join("r.json"));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"]["fixed"]["zero"], true);
    assert_eq!(v["result"]["movable"]["sections"], serde_json::json!(["x0", "x1"]));
    assert_eq!(v["result"]["cbf"]["pass"], true);
    assert!(!dir.path().join("r.json.tmp").exists());
}

#[test]
fn json_hash_matches_between_runs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ex.toml"), PRODUCT).unwrap();
    insep(&["fixed", "ex.toml", "--json", "a.json"], dir.path());
    insep(&["fixed", "ex.toml", "--json", "b.json"], dir.path());
    let (a, b) = (json(&dir.path().join("a.json")), json(&dir.path().join("b.json")));
    assert_eq!(a["hash"], b["hash"]);
    assert_eq!(a["result"]["fixed"]["components"][0]["equation"], "u");
}

#[test]
fn tight_degree_bound_is_uncertified() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ex.toml"), PRODUCT).unwrap();
    let out = insep(&["analyze", "ex.toml", "--degree-bound", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("status: uncertified"));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[field]\np = \n").unwrap();
    let out = insep(&["reduce", "bad.toml", "--json", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v = json(&dir.path().join("r.json"));
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "parse");
    let out = insep(&["reduce", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn essential_demo() {
    let dir = tempfile::tempdir().unwrap();
    let text = CONIC
        .replace("\"s0\", \"s1\"]\n\n[ambient]", "\"s\", \"t\"]\n\n[ambient]")
        .replace("x0\", \"x1\", \"x2", "x\", \"y\", \"z")
        .replace("s0*x0^2 + s1*x1^2 + x2^2", "s*x^4 + t^2*y^4 + z^4")
        .replace("raise = [\"s0\", \"s1\"]", "raise = [\"s\", \"t\"]");
    std::fs::write(dir.path().join("e.toml"), text).unwrap();
    let out = insep(&["essential", "e.toml", "--json", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&dir.path().join("r.json"));
    assert_eq!(v["result"]["essential"]["field"], "F_2(s^(1/2), t)");
    assert_eq!(v["result"]["essential"]["degree"], 2);
}

#[test]
fn gen_corpus_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = insep(&["gen-corpus", out, "--seed", "5", "--count", "3", "--profile", "fermat-product"], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = std::fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 3);
    for n in &names {
        let a = std::fs::read_to_string(dir.path().join("a").join(n)).unwrap();
        let b = std::fs::read_to_string(dir.path().join("b").join(n)).unwrap();
        assert_eq!(a, b);
        let o = insep(&["reduce", &format!("a/{}", n.to_string_lossy())], dir.path());
        assert_ne!(o.status.code(), Some(1));
    }
    let o = insep(&["gen-corpus", "c", "--profile", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
