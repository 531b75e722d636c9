//! End-to-end exercises of the binary: the exit-code contract, the cache
//! formats, and output determinism.

use std::path::Path;
use std::process::{Command, Output};

fn mbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbar"))
        .args(args)
        .env_remove("MBAR_CACHE")
        .output()
        .expect("binary runs")
}

fn mbar_env(args: &[&str], key: &str, value: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbar"))
        .args(args)
        .env_remove("MBAR_CACHE")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn class_text_output() {
    let out = mbar(&[
        "class", "--n", "5", "--method", "strata", "--format", "text",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 + 5*L + L^2\n");

    let out = mbar(&["class", "--n", "3", "--method", "stirling"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn class_beyond_oracle_range_is_a_usage_error() {
    let out = mbar(&["class", "--n", "100", "--method", "strata"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = mbar(&["class", "--does-not-exist", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn checks_pass_on_computed_tables() {
    for kind in ["ulc", "realroot", "symmetry", "unimodal"] {
        let out = mbar(&["check", kind, "--n-max", "8", "--jobs", "3"]);
        assert_eq!(code(&out), 0, "{kind}: {}", stdout(&out));
    }
}

#[test]
fn check_realroot_small_range() {
    let out = mbar(&["check", "realroot", "--n-max", "6", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all checks passed"));
}

#[test]
fn injected_fake_table_fails_ulc_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("fake.txt");
    std::fs::write(&cache, "MBARCACHE v1\n7: 1,1,10,1,1\n").unwrap();
    let out = mbar(&[
        "check",
        "ulc",
        "--n-max",
        "7",
        "--cache",
        cache.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let findings = report["findings"].as_array().unwrap();
    assert!(!findings.is_empty());
    assert!(findings.iter().any(|f| f["n"] == 7 && f["l"] == 2));
}

#[test]
fn injected_wiggly_table_fails_unimodality() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("fake.txt");
    // symmetric with boundary ones, so it passes load validation, but it dips
    std::fs::write(&cache, "MBARCACHE v1\n8: 1,10,1,1,10,1\n").unwrap();
    let out = mbar(&[
        "check",
        "unimodal",
        "--n",
        "8",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn asymptotic_degree_zero_is_flat() {
    let out = mbar(&[
        "asymptotic",
        "--l",
        "0",
        "--n",
        "10:100:10",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,l,ratio_minus_one,scaled"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.ends_with(",0,0,0")));
}

#[test]
fn asymptotic_error_column_decays_at_l2() {
    let out = mbar(&[
        "asymptotic",
        "--l",
        "2",
        "--n",
        "50:400:50",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 8);
    assert!(results
        .iter()
        .all(|r| r["within_inverse_n_squared"] == true));
    let finding = &v["findings"][0];
    assert_eq!(finding["kind"], "empirical_threshold");
    assert_eq!(finding["empirical_n"], 50);
}

#[test]
fn asymptotic_out_of_range_l_is_exit_2() {
    let out = mbar(&["asymptotic", "--l", "30", "--n", "40"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn asymptotic_bad_n_spec_is_exit_2() {
    let out = mbar(&["asymptotic", "--l", "1", "--n", "4:8:0"]);
    assert_eq!(code(&out), 2);
    let out = mbar(&["asymptotic", "--l", "1", "--n", "abc"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_writes_cache_and_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.txt");
    let run = |jobs: &str| {
        mbar(&[
            "scan",
            "--n-max",
            "12",
            "--jobs",
            jobs,
            "--cache",
            cache.to_str().unwrap(),
            "--format",
            "json",
        ])
    };
    let first = run("4");
    assert_eq!(code(&first), 0);
    let cache_bytes = std::fs::read(&cache).unwrap();
    assert_eq!(
        String::from_utf8_lossy(&cache_bytes).lines().count(),
        11, // header + 10 records
    );
    let second = run("1");
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(std::fs::read(&cache).unwrap(), cache_bytes);
}

#[test]
fn scan_rejects_a_corrupt_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("bad.txt");
    std::fs::write(&cache, "GARBAGE v9\n3: 1\n").unwrap();
    let out = mbar(&["scan", "--n-max", "5", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn class_cross_checks_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.txt");
    let out = mbar(&["class", "--n", "5", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    // agreeing recompute by another method is fine
    let out = mbar(&[
        "class",
        "--n",
        "5",
        "--method",
        "cnki",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    // a tampered record is an internal inconsistency
    std::fs::write(&cache, "MBARCACHE v1\n5: 1,6,1\n").unwrap();
    let out = mbar(&["class", "--n", "5", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn cache_round_trip_reproduces_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.txt");
    let out = mbar(&["scan", "--n-max", "9", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let parsed = mbar_cli::cache::CacheFile::load(&cache).unwrap();
    assert_eq!(parsed.len(), 7);
    assert_eq!(parsed.get(7).unwrap().ranks_csv(), "1,42,127,42,1");
    // a second scan over a prefix agrees with what is already there
    let out = mbar(&["scan", "--n-max", "6", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), parsed.to_string());
}

#[test]
fn cache_path_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.txt");
    let out = mbar_env(&["class", "--n", "4"], "MBAR_CACHE", &cache);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&cache).unwrap().contains("4: 1,1"));
}

#[test]
fn json_reports_have_the_fixed_shape() {
    let out = mbar(&["betti", "--n", "6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "command",
        "config",
        "resolved_convention",
        "results",
        "findings",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "betti");
    assert_eq!(
        v["results"][0]["ranks"],
        serde_json::json!(["1", "16", "16", "1"])
    );
    assert_eq!(v["resolved_convention"]["k_start"], 0);
    assert_eq!(v["resolved_convention"]["j_start"], 0);
}

#[test]
fn scan_reports_surface_the_rank_formula_discrepancy() {
    let out = mbar(&["scan", "--n-max", "5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let findings = v["findings"].as_array().unwrap();
    let f = findings
        .iter()
        .find(|f| f["kind"] == "rank_formula_m0_reading")
        .expect("discrepancy finding present");
    assert_eq!(f["literal"], "2");
    assert_eq!(f["validated"], "1");
}
