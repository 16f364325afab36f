use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circulant-wl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn wl2_text_and_json() {
    let o = cli(&["wl2", "Z9:1,3,6,8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rounds: 1, classes: 0|1,8|2,7|3,6|4,5\n");
    let o = cli(&["wl2", "Z9:1,3,6,8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rounds"], 1);
    assert_eq!(v["classes"], serde_json::json!([[0], [1, 8], [2, 7], [3, 6], [4, 5]]));
}

#[test]
fn smodule_agrees_with_wl2() {
    let a = stdout(&cli(&["smodule", "Z4xZ4:(1,0),(3,0),(0,1),(0,3),(1,1),(3,3)"]));
    let b = stdout(&cli(&["wl2", "Z4xZ4:(1,0),(3,0),(0,1),(0,3),(1,1),(3,3)"]));
    assert_eq!(a, b);
    assert!(a.starts_with("rounds: 0"));
}

#[test]
fn spectrum_csv() {
    let o = cli(&["spectrum", "Z7:1,6"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,re,im,class"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    let mut classes: Vec<&str> = rows.iter().map(|r| r[3]).collect();
    classes.sort_unstable();
    classes.dedup();
    assert_eq!(classes.len(), 4);
    assert_eq!(rows[0][1], "2.000000000000");
}

#[test]
fn canon_codes_match_for_isomorphic_tournaments() {
    let code = |g: &str| {
        let v: serde_json::Value = serde_json::from_str(&stdout(&cli(&["canon", g, "--format", "json"]))).unwrap();
        assert_eq!(v["order"].as_array().unwrap().len(), 7);
        v["code"].as_str().unwrap().to_string()
    };
    assert_eq!(code("Z7:1,2,4"), code("Z7:3,5,6"));
    assert_ne!(code("Z7:1,2,4"), code("Z7:1,6"));
    assert_eq!(cli(&["canon", "Z9:1,8"]).status.code(), Some(1));
}

#[test]
fn tinhofer_check_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&cli(&["tinhofer-check", "Z7:1,6", "--format", "json"]))).unwrap();
    assert_eq!(v["property"], true);
    assert!(v["certificate"].is_null());
    let v: serde_json::Value = serde_json::from_str(&stdout(&cli(&[
        "tinhofer-check",
        "Z4xZ4:(1,0),(3,0),(0,1),(0,3),(1,1),(3,3)",
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(v["property"], false);
    assert_eq!(v["certificate"][0], serde_json::json!([0, 0]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&cli(&[
        "tinhofer-check",
        "Z11:1,3",
        "--max-nodes",
        "2",
        "--format",
        "json",
    ])))
    .unwrap();
    assert!(v["property"].is_null());
}

#[test]
fn cr_with_individualization() {
    let o = cli(&["cr", "Z7:1,2,4", "--individualize", "3"]);
    assert_eq!(stdout(&o), "rounds: 1, classes: 0,4,5|1,2,6|3\n");
    assert_eq!(cli(&["cr", "Z7:1,2,4", "--individualize", "9"]).status.code(), Some(1));
}

#[test]
fn adjacency_file_input() {
    let dir = std::env::temp_dir().join(format!("circulant-wl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c5.txt");
    std::fs::write(&path, "# five-cycle\n5\n0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 4\n4 3\n4 0\n0 4\n").unwrap();
    let o = cli(&["cr", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "rounds: 0, classes: 0,1,2,3,4\n");
    let o = cli(&["wl2", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "rounds: 0, pair classes: 3\n");
    assert_eq!(cli(&["smodule", path.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_graphs_report_columns() {
    let o = cli(&["wl2", "Z9:1,x"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("column 6"), "{err}");
    assert!(err.contains("\n  Z9:1,x\n       ^"), "{err}");
    assert_eq!(cli(&["wl2", "Z9:0,1"]).status.code(), Some(1));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&[]).status.code(), Some(1));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cli(&["sweep", "--sample", "5"]).status.code(), Some(1));
    assert_eq!(cli(&["sweep", "--n-max", "21"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["--version"]).status.code(), Some(0));
}

#[test]
fn sweep_output_is_independent_of_threads() {
    let args = |jobs: &'static str| vec!["sweep", "--n-min", "8", "--n-max", "14", "--sample", "40", "--seed", "7", "--jobs", jobs];
    let one = cli(&args("1"));
    let four = cli(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let seq = cli(&["sweep", "--n-min", "8", "--n-max", "14", "--sample", "40", "--seed", "7", "--sequential"]);
    assert_eq!(one.stdout, seq.stdout);
    let text = stdout(&one);
    assert!(text.starts_with("n,mask,rounds_smodule,rounds_wl2,bound,d\n"));
    assert_eq!(text.lines().count(), 1 + 7 * 40);
    let other_seed = cli(&["sweep", "--n-min", "8", "--n-max", "14", "--sample", "40", "--seed", "8"]);
    assert_ne!(one.stdout, other_seed.stdout);
}

#[test]
fn sweep_json_and_out_file() {
    let path = std::env::temp_dir().join(format!("circulant-wl-sweep-{}.json", std::process::id()));
    let o = cli(&["sweep", "--n-min", "9", "--n-max", "9", "--exhaustive", "--cross-check", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 256);
    let z9 = rows.iter().find(|r| r["mask"] == "0x14a").unwrap();
    assert_eq!(z9["rounds_smodule"], 1);
    assert_eq!(z9["rounds_wl2"], 1);
    assert_eq!(z9["bound"], 20);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn counterexample_reports_mismatch() {
    let o = cli(&["counterexample"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("tinhofer property: false"));
    assert!(text.contains("certificate: [(0, 0), "));
    assert!(String::from_utf8_lossy(&o.stderr).contains("round 2"));
}
