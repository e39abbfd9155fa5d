use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const OR_OBSERVABILITY: &str = "\
.model obs
.inputs a b
.outputs f
.names a b g
11 1
.names g a f
1- 1
-1 1
.end
";

const SOLE_AND: &str = "\
.model and
.inputs a b
.outputs f
.names a b f
11 1
.end
";

const INVERTED: &str = "\
.model obs
.inputs a b
.outputs f
.names a b g
11 1
.names g a f
00 1
.end
";

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn dcopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcopt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn optimize_reports_literals_and_writes_blif() {
    let input = tmp("cli_obs.blif", OR_OBSERVABILITY);
    let output = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli_obs_out.blif");
    let o = dcopt(&[
        "optimize",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--verify",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats["literals_before"], 4);
    assert_eq!(stats["literals_after"], 0);
    let written = fs::read_to_string(&output).unwrap();
    assert!(written.contains(".names a f\n1 1\n"), "{written}");
    let v = dcopt(&["verify", input.to_str().unwrap(), output.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn optimize_table_output() {
    let input = tmp("cli_obs_table.blif", OR_OBSERVABILITY);
    let output = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli_obs_table_out.blif");
    let o = dcopt(&[
        "optimize",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--global",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("SOP literals    4 -> 0"), "{s}");
    assert!(s.contains("context         global"), "{s}");
    assert!(s.lines().any(|l| l.starts_with("time") && l.ends_with(" s")));
}

#[test]
fn cdc_of_sole_and_is_empty() {
    let input = tmp("cli_and.blif", SOLE_AND);
    let o = dcopt(&["cdc", "--in", input.to_str().unwrap(), "--node", "f"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("dcset: (empty)"), "{s}");
    assert!(s.contains("onset: 11"), "{s}");
    assert!(s.contains("leaves: a b"), "{s}");
    assert!(s.contains("roots: f"), "{s}");
}

#[test]
fn cdc_prints_minterms_in_fanin_order() {
    let input = tmp("cli_obs_cdc.blif", OR_OBSERVABILITY);
    let o = dcopt(&["cdc", "--in", input.to_str().unwrap(), "--node", "g", "--global"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("fanins: a b"), "{s}");
    assert!(s.contains("dcset: 10 11"), "{s}");
    assert!(s.contains("onset: (empty)"), "{s}");
}

#[test]
fn verify_exit_codes() {
    let a = tmp("cli_verify_a.blif", OR_OBSERVABILITY);
    let b = tmp("cli_verify_b.blif", INVERTED);
    let same = dcopt(&["verify", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).contains("equivalent"));
    let diff = dcopt(&["verify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(diff.status.code(), Some(2));
    assert!(stdout(&diff).contains("counterexample on output f"));
    let missing = dcopt(&["verify", a.to_str().unwrap(), "/nonexistent.blif"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(dcopt(&["optimize"]).status.code(), Some(1));
    assert_eq!(dcopt(&["frobnicate"]).status.code(), Some(1));
    let input = tmp("cli_usage.blif", SOLE_AND);
    let o = dcopt(&[
        "optimize",
        "--in",
        input.to_str().unwrap(),
        "--out",
        "/dev/null",
        "--window",
        "2by2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let bad = tmp(
        "cli_bad.blif",
        ".model x\n.inputs a\n.outputs f\n.names a q f\n11 1\n.end\n",
    );
    let o = dcopt(&["stats", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn stats_labels_sop_literals() {
    let input = tmp("cli_stats.blif", OR_OBSERVABILITY);
    let o = dcopt(&["stats", input.to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("SOP literals    4"), "{s}");
    let j = dcopt(&["stats", input.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["sop_literals"], 4);
    assert_eq!(v["inputs"], 2);
    assert_eq!(v["nodes"], 2);
}
