use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgtrace"))
        .args(args)
        .env_remove("HGTRACE_FIXTURE_DIR")
        .output()
        .expect("spawn hgtrace")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn trace_matches_oracle() {
    let o = run(&["trace", "--group", "2,4,6", "--weight", "8", "--prime", "13,37,61"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = json_lines(&o);
    let totals: Vec<i64> = recs.iter().map(|r| r["total"].as_i64().unwrap()).collect();
    assert_eq!(totals, [3802, 36466, 1660618]);
    for r in &recs {
        assert_eq!(r["schema_version"], 1);
        assert_eq!(r["residual"], 0);
        assert_eq!(r["config"]["format"], "json");
        assert!(r["config"].get("threads").is_none());
    }
}

#[test]
fn partial_trace_is_flagged() {
    let o = run(&["trace", "--group", "2,3,oo", "--weight", "12", "--prime", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert_eq!(r["partial"], true);
    assert!(r["total"].is_null());
    assert_eq!(r["flags"][0], "elliptic terms unavailable");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["trace", "--group", "2,5,7", "--weight", "8", "--prime", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--threads", "0", "table"]).status.code(), Some(2));
}

#[test]
fn legendre_count() {
    let r = &json_lines(&run(&["count", "legendre", "--prime", "7", "--lambda", "2"]))[0];
    assert_eq!(r["n_points"], 8);
    assert_eq!(r["trace"], 0);
    assert_eq!(r["status"], "good");
}

#[test]
fn np_sum_value() {
    let o = run(&[
        "sum", "np", "--alpha", "1/2,1/2", "--beta", "1,1", "--prime", "13", "--lambda", "3", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row = s.lines().nth(1).unwrap();
    assert!(row.starts_with("13,3,"), "{row}");
    assert!(row.ends_with(",-2"), "{row}");
}

#[test]
fn fixture_commands() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../testdata/6.8.a.a.json");
    assert_eq!(run(&["fixture", "validate", path]).status.code(), Some(0));
    assert_eq!(run(&["fixture", "check", "24.5.h.b"]).status.code(), Some(0));
    if !cfg!(feature = "fetch") {
        let o = run(&["fixture", "fetch", "6.8.a.a"]);
        assert_eq!(o.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&o.stderr).contains("offline"));
    }
}

#[test]
fn verify_csv() {
    let o = run(&["verify", "clausen", "--prime", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "suite,checks,failures,pass\nclausen,552,0,true\n");
}

#[test]
fn output_independent_of_threads() {
    let args = [
        "trace", "--group", "2,oo,oo", "--weight", "6", "--prime", "13,17", "--terms",
    ];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
