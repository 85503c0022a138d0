use std::path::Path;
use std::process::{Command, Output};

fn plr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plr")).args(args).env_remove("PLR_CACHE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sade_distribution() {
    let o = plr(&["count", "--r", "2", "--s", "2", "--n", "7", "--method", "sade"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("counts: 1, 28, 266, 1008, 1302"), "{text}");
    assert!(text.contains("total  2605"));
}

#[test]
fn default_method_on_a_single_cell() {
    let o = plr(&["count", "--r", "1", "--s", "1", "--n", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("counts: 1, 1"));
}

#[test]
fn single_weight_via_blocks() {
    let o = plr(&["count", "--r", "3", "--s", "3", "--n", "7", "--method", "blocks", "--m", "9"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2212980");
}

#[test]
fn methods_agree_in_json() {
    let mut seen = Vec::new();
    for method in ["oracle", "sade", "blocks"] {
        let o = plr(&["--format", "json", "count", "--r", "3", "--s", "2", "--n", "4", "--method", method]);
        assert!(o.status.success(), "{method}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["method"], method);
        seen.push(v["counts"].clone());
    }
    assert_eq!(seen[0], seen[1]);
    assert_eq!(seen[1], seen[2]);
}

#[test]
fn csv_output() {
    let o = plr(&["--format", "csv", "count", "--r", "1", "--s", "1", "--n", "2"]);
    assert_eq!(stdout(&o), "r,s,n,m,count\n1,1,2,0,1\n1,1,2,1,2\n");
}

#[test]
fn polynomials() {
    let o = plr(&["poly", "--m", "1"]);
    assert_eq!(stdout(&o).lines().next(), Some("rsn"));
    let o = plr(&["poly", "--m", "2", "--method", "incexc-truncated"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("(rsn)^2 + (rsn)(2 - 100\u{305})"), "{}", stdout(&o));
    let o = plr(&["poly", "--m", "3", "--eval", "2,2,3"]);
    assert!(stdout(&o).contains("f_3(2,2,3) = "), "{}", stdout(&o));
}

#[test]
fn truncated_polynomial_reports_its_exact_range() {
    let o = plr(&["poly", "--m", "6", "--method", "incexc-truncated", "--max-vertices", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("degree >= 9"), "{}", stdout(&o));
}

#[test]
fn class_counts() {
    let o = plr(&["classes", "--r", "3", "--s", "3", "--n", "3", "--kind", "mc"]);
    assert!(stdout(&o).contains("total  39"));
    let o = plr(&["classes", "--r", "2", "--s", "2", "--n", "2", "--kind", "isom"]);
    assert!(stdout(&o).contains("total  20"));
    let o = plr(&["classes-unbounded", "--max-m", "3", "--kind", "main"]);
    assert!(stdout(&o).contains("counts: 1, 1, 2, 5"));
}

#[test]
fn refused_requests_exit_with_two() {
    for args in [
        &["count", "--r", "9", "--s", "9", "--n", "9", "--method", "oracle"][..],
        &["classes", "--r", "2", "--s", "3", "--n", "3", "--kind", "isom"][..],
        &["count", "--r", "0", "--s", "1", "--n", "1"][..],
        &["count", "--r", "6", "--s", "6", "--n", "6", "--method", "blocks", "--max-ones", "4"][..],
    ] {
        let o = plr(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_passes_and_catches_a_bad_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.txt");
    let cache_arg = cache.to_str().unwrap();
    let base = ["--cache", cache_arg, "verify", "--max-dim", "3", "--poly-m", "3", "--poly-k", "2"];
    let o = plr(&base);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verify: OK"));
    corrupt(&cache, "PLR 3 3 3 4 ", "1");
    let o = plr(&base);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("verify: FAILED"));
}

/// Appends a line giving `prefix` a wrong value; later lines win.
fn corrupt(cache: &Path, prefix: &str, value: &str) {
    let text = std::fs::read_to_string(cache).unwrap();
    assert!(text.lines().any(|l| l.starts_with(prefix)), "{prefix} not cached");
    std::fs::write(cache, format!("{text}{prefix}{value}\n")).unwrap();
}

#[test]
fn counts_are_cached_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.txt");
    let cache_arg = cache.to_str().unwrap();
    let o = plr(&["--cache", cache_arg, "count", "--r", "2", "--s", "2", "--n", "3"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.contains("PLR 2 2 3 4 18"), "{text}");
    let o = plr(&["--cache", cache_arg, "count", "--r", "2", "--s", "2", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), text);
}

#[test]
fn checkpoints_allow_resuming() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().to_str().unwrap();
    let args = ["count", "--r", "4", "--s", "3", "--n", "5", "--method", "sade", "--checkpoint-dir", ck];
    let first = plr(&args);
    assert!(first.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let again = plr(&args);
    assert_eq!(stdout(&first), stdout(&again));
}
