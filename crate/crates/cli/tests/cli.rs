use std::process::{Command, Output};

use antiprim::DimensionRecord;

fn antiprim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antiprim"))
        .args(args)
        .env_remove("ANTIPRIM_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn cosets_orbit_of_one() {
    let o = antiprim(&["cosets", "--q", "3", "--m", "2", "--x", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["leader"], 1);
    assert_eq!(v["size"], 4);
    assert_eq!(v["elements"], serde_json::json!([1, 3, 7, 9]));
}

#[test]
fn cosets_range_lists_leaders() {
    let o = antiprim(&["cosets", "--q", "3", "--m", "2", "--range", "1..9", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "leader,size\n1,4\n2,4\n5,1\n");
}

#[test]
fn non_prime_power_is_a_usage_error() {
    let o = antiprim(&["cosets", "--q", "6", "--m", "2", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q must be a prime power"));
}

#[test]
fn leaders_top() {
    let o = antiprim(&["leaders", "--q", "3", "--m", "5", "--top", "6", "--format", "csv"]);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(rows, ["122", "61", "47", "43", "41", "40"]);
}

#[test]
fn deltas_odd_m_all_proved() {
    let o = antiprim(&["deltas", "--q", "3", "--m", "5", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["status"] == "proved"));
    assert_eq!(rows[5]["value"], "40");
}

#[test]
fn deltas_even_m_flags_conjectures() {
    let o = antiprim(&["deltas", "--q", "3", "--m", "6", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let status: Vec<&str> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["proved", "proved", "conjectured", "conjectured"]);
}

#[test]
fn deltas_verify_matches_oracle() {
    let o = antiprim(&["deltas", "--q", "4", "--m", "2", "--verify", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rows.iter().all(|r| r["matches"] == true));
}

#[test]
fn dims_examples() {
    let o = antiprim(&["dims", "--q", "3", "--m", "5", "--delta", "31", "--b", "1", "--format", "json"]);
    let r: DimensionRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.dimension, 84);
    assert_eq!(r.closed_form_source.as_deref(), Some("T3 row1"));

    let o = antiprim(&["dims", "--q", "3", "--m", "2", "--delta", "2", "--b", "0", "--format", "json"]);
    let r: DimensionRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.dimension, 5);

    let o = antiprim(&["dims", "--q", "3", "--m", "2", "--delta", "4", "--b", "1"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("bose distance") && l.ends_with(" 5")));
}

#[test]
fn dims_json_round_trips() {
    let o = antiprim(&["dims", "--q", "4", "--m", "3", "--delta", "20", "--format", "json"]);
    let text = stdout(&o);
    let r: DimensionRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let lib = antiprim::dimension_record(
        &antiprim::DefiningSetSpec::new(antiprim::CodeParams::new(4, 3).unwrap(), 20, 1).unwrap(),
    )
    .unwrap();
    assert_eq!(r, lib);
}

#[test]
fn dims_delta_out_of_range() {
    let o = antiprim(&["dims", "--q", "3", "--m", "2", "--delta", "11"]);
    assert_eq!(o.status.code(), Some(2));
    let o = antiprim(&["dims", "--q", "3", "--m", "2", "--delta", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_csv_columns() {
    let o = antiprim(&["table", "--q", "3", "--m", "2", "--delta", "2..6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q,m,n,delta,b,t_size,dimension,bose_distance,closed_form,source"
    );
    let dims: Vec<&str> = lines.map(|l| l.split(',').nth(6).unwrap()).collect();
    assert_eq!(dims, ["6", "2", "2", "2", "1"]);
}

#[test]
fn verify_single_claim() {
    let o = antiprim(&["verify", "--claims", "T10", "--q", "3", "--m", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn verify_unknown_claim() {
    let o = antiprim(&["verify", "--claims", "BOGUS"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("BOGUS") && err.contains("T10") && err.contains("C20"));
}

#[test]
fn verify_conjecture_counterexample_exits_zero() {
    let o = antiprim(&["verify", "--claims", "C20", "--q", "3", "--m", "12"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: conjecture counterexample: C20"));
}

#[test]
fn verify_all_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = ["a.json", "b.json"]
        .iter()
        .map(|f| dir.path().join(f).to_string_lossy().into_owned())
        .collect();
    for (path, jobs) in paths.iter().zip(["1", "4"]) {
        let o = antiprim(&["verify", "--all", "--max-n", "1000000", "--jobs", jobs, "--out", path]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let load = |p: &str| {
        let mut doc: antiprim::lab::SweepDocument = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        doc.strip_timings();
        doc
    };
    let (a, b) = (load(&paths[0]), load(&paths[1]));
    assert_eq!(a, b);
    assert_eq!(a.tool, "antiprim");
    assert_eq!(a.grid.max_n, 1_000_000);
    assert!(a.count(antiprim::lab::Outcome::SkippedBudget) > 0);
}

#[test]
fn max_n_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_antiprim"))
        .args(["verify", "--claims", "T10", "--q", "3", "--m", "5,7", "--format", "json"])
        .env("ANTIPRIM_MAX_N", "1000")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let outcomes: Vec<&str> = doc["reports"][0]["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["outcome"].as_str().unwrap())
        .collect();
    assert_eq!(outcomes, ["pass", "skipped-budget"]);
}
