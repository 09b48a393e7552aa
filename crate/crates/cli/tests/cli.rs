use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic-covers"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_reports_regime() {
    let o = run(&["info", "--q", "2", "--ell", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("n_q = 2"), "{s}");
    assert!(s.contains("modulus F_Q: 1,1,1"), "{s}");
    assert!(s.contains("first genera: 0, 2, 4"), "{s}");
}

#[test]
fn kummer_regime_is_a_domain_error() {
    let o = run(&["info", "--q", "4", "--ell", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Kummer"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["ensemble", "--q", "2", "--ell", "3", "--g", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["ensemble", "--q", "2", "--ell", "3", "--g", "4", "--samples", "10"]).status.code(),
        Some(2)
    );
    let bad_tuple = run(&["count-points", "--q", "2", "--ell", "3", "--tuple", "1,x", "--b", "1"]);
    assert_eq!(bad_tuple.status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "--q", "2", "--ell", "3", "--D", "6", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count = 30"));
    let o = run(&["enumerate", "--q", "2", "--ell", "3", "--D", "2"]);
    let s = stdout(&o);
    assert!(s.contains("\n1,1,1;1\n") && s.contains("\n1;1,1,1\n"), "{s}");
}

#[test]
fn inadmissible_strata_are_reported() {
    let o = run(&["enumerate", "--q", "2", "--ell", "3", "--D", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty stratum"));
    let o = run(&["ensemble", "--q", "2", "--ell", "3", "--g", "3", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty stratum"));
}

#[test]
fn count_points_table() {
    for b in ["1", "2", "3"] {
        let o = run(&["count-points", "--q", "2", "--ell", "3", "--tuple", "1,1,1;1", "--b", b]);
        assert_eq!(o.status.code(), Some(0));
        let s = stdout(&o);
        assert!(s.contains("total = 3"), "{s}");
        assert!(s.contains("labeling = least"), "{s}");
        let rows: Vec<&str> = s
            .lines()
            .skip_while(|l| !l.trim_start().starts_with('x'))
            .skip(1)
            .take(3)
            .map(|l| l.split_whitespace().next().unwrap())
            .collect();
        assert_eq!(rows, ["0", "1", "inf"]);
    }
}

#[test]
fn lseries_prints_roots() {
    let o = run(&["lseries", "--q", "2", "--ell", "3", "--points", "0,1", "--w", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("u^1: [2,0]"), "{s}");
    assert!(s.contains("root magnitudes: 0.500000000000"), "{s}");
}

#[test]
fn ensemble_json_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("out{threads}.json"));
        let csv = dir.path().join(format!("out{threads}.csv"));
        let o = run(&[
            "--threads",
            threads,
            "ensemble",
            "--q",
            "2",
            "--ell",
            "3",
            "--g",
            "8",
            "--exhaustive",
            "--json",
            path.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["ensemble_size"], 1350);
        assert!(v["runtime_ms"].is_null());
        let csv = std::fs::read_to_string(&csv).unwrap();
        assert!(csv.starts_with("N,count,empirical,theoretical\n0,396,22/75,8/27\n"), "{csv}");
        reports.push(text);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn monte_carlo_is_reproducible() {
    let args = [
        "ensemble", "--q", "2", "--ell", "3", "--g", "10", "--samples", "200", "--seed", "7",
    ];
    let a = stdout(&run(&args));
    let mut with_threads = vec!["--threads", "2"];
    with_threads.extend(args);
    let b = stdout(&run(&with_threads));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["mode"], "monte-carlo");
    assert_eq!(v["seed"], 7);
}

#[test]
fn timing_fills_runtime() {
    let o = run(&["ensemble", "--q", "2", "--ell", "3", "--g", "2", "--exhaustive", "--timing"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["runtime_ms"].is_u64());
}

#[test]
fn verify_sweep_passes() {
    let o = run(&["verify", "--q", "2", "--ell", "3", "--max-D", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("all checks passed"));
    assert!(!s.contains("FAIL"));
}
