use std::process::{Command, Output};

fn nilorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilorbit")).args(args).output().expect("spawn nilorbit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

#[test]
fn enumerate_sp4_lists_five_orbits() {
    let out = nilorbit(&["enumerate", "--family", "C", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("2e1\t∅\t0"));
}

#[test]
fn enumerate_so7_lists_eight_orbits() {
    let out = nilorbit(&["enumerate", "--family", "B", "--rank", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows.last().unwrap()["label"], "e3-e2,e3+e2");
    assert_eq!(rows.last().unwrap()["dim"], 5);
}

#[test]
fn invalid_nilradical_is_a_usage_error() {
    let out = nilorbit(&["enumerate", "--family", "C", "--rank", "2", "--nilradical", "e2-e1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nilorbit(&["poset", "--family", "D", "--rank", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nilorbit(&["verify", "--check", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_output_is_well_formed() {
    let out = nilorbit(&["poset", "--family", "C", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("digraph \"C2:m[2e1]\" {"));
    assert!(text.trim_end().ends_with('}'));
    assert_eq!(text.matches("{").count(), text.matches("}").count());
    assert_eq!(text.lines().filter(|l| l.contains(" -> ")).count(), 5);
}

#[test]
fn so8_overlays_agree() {
    for nilradical in ["e2-e1", "e2+e1", "e4-e3"] {
        let out = nilorbit(&["poset", "--family", "D", "--rank", "4", "--nilradical", nilradical, "--overlay"]);
        assert_eq!(out.status.code(), Some(0), "{nilradical}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(" 0 disagreement"));
    }
}

#[test]
fn scoped_verify_writes_one_report_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let out = nilorbit(&[
        "verify", "--family", "D", "--rank", "4", "--check", "conjecture", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let reports: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["status"] == "pass" && r["check"] == "conjecture"));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["verify", "--family", "B", "--rank", "3", "--no-timing"];
    let first = nilorbit(&args);
    let second = nilorbit(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn out_of_range_fault_is_rejected() {
    let out = nilorbit(&["verify", "--family", "B", "--rank", "3", "--inject-fault", "500"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_of_a_clean_report_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clean.jsonl");
    let out = nilorbit(&["verify", "--family", "C", "--rank", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = nilorbit(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn lengths_table_matches_brute_force() {
    let out = nilorbit(&["lengths", "--family", "D", "--rank", "4"]);
    assert_eq!(out.status.code(), Some(0));
    for row in stdout(&out).lines().skip(1) {
        let cols: Vec<&str> = row.split('\t').collect();
        assert_eq!(cols[6], cols[7], "{row}");
    }
}
