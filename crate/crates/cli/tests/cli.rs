use std::process::{Command, Output};

fn agr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agr")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn compare_example() {
    let v = json(&agr(&["compare", "--f", "x^x", "--h", "g^x", "--mode", "discrete"]));
    assert_eq!(v["verdict"], "Harder");
}

#[test]
fn solve_example() {
    let v = json(&agr(&["solve", "--family", "tlp", "--p", "7", "--y", "4"]));
    assert_eq!(v["solutions"], serde_json::json!(["2", "4"]));
}

#[test]
fn bsgs_method_agrees() {
    let a = json(&agr(&["solve", "--family", "dlp", "--p", "101", "--y", "17"]));
    let b = json(&agr(&["solve", "--family", "dlp", "--p", "101", "--y", "17", "--method", "bsgs"]));
    assert_eq!(a["solutions"], b["solutions"]);
}

#[test]
fn rank_example() {
    let out = agr(&["rank", "--mode", "continuous", "--use-derivative", "x", "-1/x", "x^n", "g^x", "x^x"]);
    let v = json(&out);
    let classes = v.as_array().unwrap();
    assert_eq!(classes.len(), 5);
    let text = v.to_string();
    let pos: Vec<usize> = ["\"x\"", "\"-1/x\"", "\"x^n\"", "\"g^x\"", "\"x^x\""].iter().map(|s| text.find(s).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn reduce_demos_run() {
    for demo in ["gx-shift", "gxxx", "gxn-dlog", "dlp-spp"] {
        let out = agr(&["reduce", "--demo", demo, "--p", "11", "--y", "3"]);
        assert!(out.status.success(), "{demo}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = agr(&["reduce", "--demo", "crt", "--p", "3", "--q", "5", "--y", "8", "--format", "text"]);
    assert!(out.status.success());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| agr(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["compare", "--f", "x^x"]), 2);
    assert_eq!(code(&["bogus"]), 2);
    assert_eq!(code(&["parse", "--f", "x^^"]), 3);
    assert_eq!(code(&["solve", "--family", "dlp", "--p", "15", "--y", "4"]), 3);
    assert_eq!(code(&["solve", "--family", "dlp", "--p", "7", "--y", "0"]), 3);
    let bound = Command::new(env!("CARGO_BIN_EXE_agr"))
        .env("AGR_WORK_BOUND", "10")
        .args(["solve", "--family", "tlp", "--p", "101", "--y", "4"])
        .output()
        .unwrap();
    assert_eq!(bound.status.code(), Some(4));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "family=tlp\np=7\n").unwrap();
    let v = json(&agr(&["solve", "--config", cfg.to_str().unwrap(), "--y", "4"]));
    assert_eq!(v["solutions"], serde_json::json!(["2", "4"]));
}
