use std::path::Path;

use serde_json::Value;
use tribinom::cli::run;

fn run_to(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = dir.join("out.txt");
    let _ = std::fs::remove_file(&out);
    let mut argv = vec!["tribinom"];
    argv.extend_from_slice(args);
    let out_s = out.to_str().unwrap().to_owned();
    argv.extend_from_slice(&["--out", &out_s]);
    let code = run(argv);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn verify_italy_json() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["verify", "--id", "eq-italy", "--digits", "40", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["reports"][0]["status"], "PASS");
    assert_eq!(v["suite"]["digits"], 40);
    assert!(v["reports"][0]["lhs"].as_str().unwrap().starts_with("1.04145958644193544755052560472134223241"));
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn scan_lists_nine_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["scan"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "27/4");
    let (_, json) = run_to(dir.path(), &["scan", "--format", "json", "--t-max", "0"]);
    assert_eq!(serde_json::from_str::<Value>(&json).unwrap(), serde_json::json!(["27/4"]));
}

#[test]
fn divergent_record_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["verify", "--id", "xy-27-neg8-a2", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,status,matched_digits,terms_used,tail,elapsed_ms"));
    assert!(lines.next().unwrap().starts_with("xy-27-neg8-a2,SKIPPED_DIVERGENT,"));
}

#[test]
fn verify_all_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["verify-all", "--digits", "30", "--jobs", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["suite"]["fail"], 0);
    assert_eq!(v["suite"]["skipped"], 4);
    assert_eq!(v["reports"].as_array().unwrap().len(), 79);
    let ids: Vec<_> = v["reports"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn markdown_truncates_long_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["verify", "--id", "eq-italy", "--digits", "40"]);
    assert_eq!(code, 0);
    assert!(text.contains("| 1.041459586441935447550526… |"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_to(dir.path(), &["verify", "--id", "eq-italy", "--digits", "4"]).0, 2);
    assert_eq!(run_to(dir.path(), &["verify", "--id", "eq-italy", "--max-terms", "10"]).0, 2);
    assert_eq!(run_to(dir.path(), &["frobnicate"]).0, 2);
    assert_eq!(run_to(dir.path(), &["verify", "--id", "no-such-id"]).0, 2);
    assert_eq!(run_to(dir.path(), &["list", "--catalog", "/nonexistent/catalog.json"]).0, 2);
    assert_eq!(run_to(dir.path(), &["sweep", "--family", "THM99"]).0, 2);
    assert_eq!(run_to(dir.path(), &["sweep", "--family", "THM1_FIB", "--r", "x"]).0, 2);
}

#[test]
fn failing_catalog_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("bad.json");
    std::fs::write(
        &cat,
        r#"[{"id":"wrong","lhs":{"z":"8/3","a":2},"rhs":"pi^2/6","tags":[]}]"#,
    )
    .unwrap();
    let (code, text) = run_to(dir.path(), &["verify-all", "--catalog", cat.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 1);
    assert!(text.contains("wrong,FAIL,"));
}

#[test]
fn sweep_and_derivatives() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["sweep", "--family", "THM7_FIB", "--pq", "-2:5,-2:6,-3:5,-3:6,-4:7", "--digits", "25", "--format", "csv"]);
    assert_eq!(code, 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(",PASS,")).count(), 5);
    let (code, text) = run_to(dir.path(), &["sweep", "--family", "thm1-luc", "--r", "0..3", "--format", "csv"]);
    assert_eq!(code, 1);
    assert!(text.contains("thm1-luc-r1,FAIL,"));
    let (code, text) = run_to(dir.path(), &["check-derivatives", "--digits", "40", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["suite"]["pass"], 4);
}

#[test]
fn list_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), &["list", "--tag", "positive-special", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap().as_array().unwrap().len(), 9);
    let (code, text) = run_to(dir.path(), &["eval", "--id", "xy-8-1-a1", "--format", "json", "--digits", "20"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["rhs"], "1.2407959440098696744");
    assert_eq!(v[0]["lhs"], v[0]["rhs"]);
}
