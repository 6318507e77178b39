use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geomcensus"))
}

#[test]
fn census_exit_status_and_json() {
    let out = bin().args(["census", "W(3,2)", "--type", "1", "--no-cache"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["total"], 35);
    assert!(String::from_utf8_lossy(&out.stderr).contains("GrassmannLine:15"));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["build", "H(3,4) i=1"]).env("GEOMCENSUS_CACHE", dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    let ls = bin().args(["cache", "ls"]).env("GEOMCENSUS_CACHE", dir.path()).output().unwrap();
    assert!(String::from_utf8_lossy(&ls.stdout).contains("H(3,4) i=1\t45 vertices"));
}

#[test]
fn suites_empty_and_refused() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    fs::write(&empty, "").unwrap();
    let out = bin().args(["verify-suite", empty.to_str().unwrap(), "--no-cache"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["entries"], serde_json::json!([]));

    let big = dir.path().join("big.toml");
    fs::write(&big, "[[instance]]\nspec = \"W(11,3)\"\n").unwrap();
    let out = bin().args(["verify-suite", big.to_str().unwrap(), "--no-cache"]).output().unwrap();
    assert_ne!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["entries"][0]["status"], "refused");
}

#[test]
fn usage_errors() {
    let out = bin().args(["census", "Q+(5,2) halfspin:C"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 18"));
    let out = bin().args(["census"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
