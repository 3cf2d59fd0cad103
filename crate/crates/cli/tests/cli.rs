use std::path::Path;
use std::process::{Command, Output};

fn autnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autnorm"))
        .args(args)
        .env_remove("AUTNORM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// CSV rows without the trailing `millis` column.
fn rows_without_timing(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|line| line.rsplit_once(',').map_or(line, |(rest, _)| rest).to_string())
        .collect()
}

fn table_csv(kind: &str, max_n: &str, workers: &str, cache: &Path) -> Output {
    autnorm(&[
        "--format",
        "csv",
        "--workers",
        workers,
        "--cache-dir",
        cache.to_str().unwrap(),
        kind,
        "--rank",
        "2",
        "--max-n",
        max_n,
    ])
}

#[test]
fn invert_json() {
    let out = autnorm(&["--format", "json", "invert", "--rank", "2", "--images", "a,ab"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["inverse_images"], serde_json::json!(["a", "Ab"]));
    assert_eq!(v["norm1"], 3);
    assert_eq!(v["inverse_norm1"], 3);
}

#[test]
fn psi_k_family_table() {
    let out = autnorm(&["family", "psi-k", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("23"), "{text}");
    assert!(text.contains("87"), "{text}");
    assert!(!text.contains("false"), "{text}");
}

#[test]
fn beta_rank2_is_the_identity_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = table_csv("beta", "7", "1", dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut count = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(rec[0], rec[1], "{rec:?}");
        count += 1;
    }
    assert_eq!(count, 6);
}

#[test]
fn user_error_exit_code() {
    let out = autnorm(&["invert", "--rank", "2", "--images", "a,a"]);
    assert_eq!(out.status.code(), Some(1));
    let out = autnorm(&["reduce", "--rank", "2", "aqb"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn infeasible_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = autnorm(&[
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "alpha",
        "--rank",
        "3",
        "--max-n",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("candidate tuples"));
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let first = table_csv("alpha", "8", "1", dir.path());
    assert_eq!(first.status.code(), Some(0));
    assert!(dir.path().join("alpha_r2.csv").exists());
    let second = table_csv("alpha", "8", "1", dir.path());
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));

    let env_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_autnorm"))
        .args(["beta", "--rank", "2", "--max-n", "5"])
        .env("AUTNORM_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(env_dir.path().join("beta_r2.csv").exists());
}

#[test]
fn tables_do_not_depend_on_workers_or_runs() {
    let reference = {
        let dir = tempfile::tempdir().unwrap();
        rows_without_timing(&stdout(&table_csv("alpha", "10", "1", dir.path())))
    };
    for workers in ["1", "2", "0"] {
        let dir = tempfile::tempdir().unwrap();
        let out = table_csv("alpha", "10", workers, dir.path());
        assert_eq!(rows_without_timing(&stdout(&out)), reference, "workers {workers}");
    }
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["rank2-bounds", "families", "invariants"] {
        let out = autnorm(&[
            "--cache-dir",
            dir.path().to_str().unwrap(),
            "verify",
            "--suite",
            suite,
            "--max-n",
            "8",
            "--samples",
            "50",
        ]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
}
