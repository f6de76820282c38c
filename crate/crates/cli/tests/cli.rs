use std::process::{Command, Output};
use std::sync::Arc;

use dendro::presheaf::{representable, FinitePresheaf};
use dendro::{Flavor, Tree, TreeCategory};
use serde_json::Value;

fn dendro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dendro")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn enumerates_open_trees() {
    let out = dendro(&["trees", "enum", "--max-size", "3", "--flavor", "open", "--format", "term"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "*\n[*]\n[**]\n");
}

#[test]
fn ass_report_has_matching_results() {
    let out = dendro(&["verify", "ass", "--max-arity", "6", "--max-size", "5", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    let m = v["matching"].as_array().unwrap();
    assert_eq!(m.len(), 6);
    assert_eq!(m[2]["families"], 8);
    assert_eq!(m[2]["image"], 6);
    assert!(m[3..].iter().all(|r| r["injective"] == true && r["surjective"] == true));
    let again = dendro(&["ass", "verify", "--max-arity", "6", "--max-size", "5"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn reports_are_byte_identical() {
    let a = dendro(&["verify", "trees", "--max-size", "3"]);
    let b = dendro(&["verify", "trees", "--max-size", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_nonzero() {
    let out = dendro(&["trees", "info", "[*"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(!dendro(&["trees", "enum", "--max-size", "x"]).status.success());
}

#[test]
fn presheaf_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let term = dir.path().join("terminal.json");
    let t = FinitePresheaf::terminal(TreeCategory::get(Flavor::General, 3));
    std::fs::write(&term, t.to_json().to_string()).unwrap();
    let out = dendro(&["presheaf", "check", term.to_str().unwrap(), "--full"]);
    assert!(out.status.success());
    let out = dendro(&["normal", "check", term.to_str().unwrap(), "--max-size", "3"]);
    assert_eq!(json(&out)["normal"], false);

    let rep = dir.path().join("rep.json");
    let x: Arc<FinitePresheaf> = representable(&Tree::corolla(1), 3);
    std::fs::write(&rep, x.to_json().to_string()).unwrap();
    let out = dendro(&["normal", "check", rep.to_str().unwrap(), "--max-size", "3"]);
    assert_eq!(json(&out)["normal"], true);
    let out = dendro(&["shom", rep.to_str().unwrap(), term.to_str().unwrap(), "--degree", "2", "--k", "1"]);
    assert_eq!(json(&out)["count"], 1);
}

#[test]
fn build_e_writes_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let out = dendro(&["build-e", "--max-size", "2", "--flavor", "general", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["level"], 2);
    let back = FinitePresheaf::from_json(&saved["presheaf"]).unwrap();
    assert_eq!(back.sets(), json(&out)["sets"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect::<Vec<_>>());
    let tight = dendro(&["build-e", "--max-size", "3", "--budget", "1"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn category_tables_are_cached_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dendro"))
            .args(["verify", "trees", "--max-size", "3"])
            .env("DENDRO_CACHE_DIR", dir.path())
            .output()
            .expect("binary runs")
    };
    let first = run();
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(!cached.is_empty());
    assert_eq!(run().stdout, first.stdout);
}
