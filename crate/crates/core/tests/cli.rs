use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sehgalkit"))
        .args(args)
        .env_remove("SEHGALKIT_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn usage_and_input_errors_exit_1() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["alg3"]).status.code(), Some(1));
    let o = run(&["alg3", "--group", "7^[1,1,1]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(run(&["help-check", "--p", "3", "--q", "7", "--d", "4"]).status.code(), Some(1));
    assert_eq!(run(&["--qmax", "23", "tables"]).status.code(), Some(1));
}

#[test]
fn alg3_on_c7_squared() {
    let o = run(&["alg3", "--group", "7^[1,1]"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("verdict: NotTrue"));
    for t in ["(2,-1,0)", "(-1,0,2)", "(0,2,-1)"] {
        assert!(s.contains(t), "{t} missing from\n{s}");
    }
    let o = run(&["--output", "json", "alg3", "--group", "3^[1,1]x5^[1]"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "true");
    assert_eq!(v["coverage"], "exhaustive");
}

#[test]
fn gl5_check_lists_seven_empty_classes() {
    let o = run(&["gl5-check"]);
    assert!(o.status.success());
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split('\t').map(String::from).collect())
        .collect();
    let data: Vec<_> = rows.iter().filter(|r| r.len() == 4 && r[2].parse::<u64>().is_ok()).collect();
    assert_eq!(data.len(), 7);
    assert!(data.iter().all(|r| r[3] == "0"));
}

#[test]
fn help_check_reports_tuple() {
    let o = run(&["help-check", "--p", "5", "--q", "7", "--d", "3", "--tuple", "2,0,-1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let verdict: Value = serde_json::from_str(s.lines().last().unwrap()).unwrap();
    assert_eq!(verdict["tuple_feasible"], true);
    assert_eq!(verdict["column_sums"], serde_json::json!([384, 384, 384]));
}

#[test]
fn eset_uses_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--output", "json", "--cache-dir", d, "eset", "--q", "7", "--singer", "16"];
    let first = run(&args);
    assert!(first.status.success());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    // no cache directory unless asked for
    let plain = run(&["--output", "json", "eset", "--q", "7", "--singer", "16"]);
    assert_eq!(plain.stdout, first.stdout);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let a = run(&["--threads", "1", "--output", "tsv", "eset", "--q", "13", "--singer", "56"]);
    let b = run(&["--threads", "4", "--output", "tsv", "eset", "--q", "13", "--singer", "56"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let o = run(&["--threads", "1", "--output", "tsv", "tables", "--qmax", "13"]);
    let s = stdout(&o);
    assert!(s.contains("# K in the Singer cycle"));
    assert!(s.contains("# K in the diagonal torus"));
    assert!(s.contains("(-1,0,2)"));
}
