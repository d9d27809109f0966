//! End-to-end tests of the installed binary: exit codes, report formats,
//! environment overrides, and the generate/analyze round trip.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_facetsym"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .env_remove("FACETSYM_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn analyze_segment_exits_zero_with_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["analyze", "seg"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["verdict"], "SEMISIMPLE");
    assert_eq!(report["critical_count"], 2);
    assert_eq!(report["points"].as_array().unwrap().len(), 2);
    assert_eq!(report["input"]["kind"], "family");
}

#[test]
fn analyze_product_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["analyze", "dp(1)*dp(1)"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["critical_count"], 36);
}

#[test]
fn analyze_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    // malformed JSON file
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run_in(dir.path(), &["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    // neither expression nor file
    let out = run_in(dir.path(), &["analyze", "dp(x)"]);
    assert_eq!(out.status.code(), Some(1));

    // dimension cap
    let out = run_in(dir.path(), &["analyze", "dp(4)*dp(4)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_unrecognized_polytope_is_inconclusive_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let sheared = dir.path().join("sheared.json");
    std::fs::write(
        &sheared,
        r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,0],[0,-1],[1,-1],[-1,1]]}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["analyze", sheared.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["verdict"], "INCONCLUSIVE");
}

#[test]
fn generate_then_analyze_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("poly.json");
    let out = run_in(
        dir.path(),
        &["generate", "dp(1)*pdp(1)", "-o", file.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));

    let via_file = run_in(dir.path(), &["analyze", file.to_str().unwrap()]);
    let via_expr = run_in(dir.path(), &["analyze", "dp(1)*pdp(1)"]);
    assert_eq!(via_file.status.code(), Some(0));
    assert_eq!(stdout_str(&via_file), stdout_str(&via_expr));
}

#[test]
fn generate_writes_vertices_and_rejects_bad_indices() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["generate", "pdp(1)"]);
    assert_eq!(out.status.code(), Some(0));
    let poly: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(poly["vertices"].as_array().unwrap().len(), 5);

    let out = run_in(dir.path(), &["generate", "dp(0)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn predicates_on_generated_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("hex.json");
    let out = run_in(dir.path(), &["generate", "dp(1)", "-o", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_in(
        dir.path(),
        &["--format", "text", "predicates", file.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("reflexive=true smooth=true facet_symmetric=true"));
    assert_eq!(text.matches("facet normal=").count(), 6);

    // json format carries the same facts
    let out = run_in(dir.path(), &["predicates", file.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["reflexive"], true);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["facet_symmetric"], true);
    assert_eq!(v["facets"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_lemma_exit_codes_and_seed_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_in(dir.path(), &["--seed", "11", "verify-lemma", "--trials", "200"]);
    let b = run_in(dir.path(), &["--seed", "11", "verify-lemma", "--trials", "200"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout_str(&a), stdout_str(&b));

    let corrupted = run_in(
        dir.path(),
        &["verify-lemma", "--trials", "50", "--self-test-corrupt"],
    );
    assert_eq!(corrupted.status.code(), Some(2));
}

#[test]
fn env_overrides_format_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let via_env = bin()
        .current_dir(dir.path())
        .env("FACETSYM_FORMAT", "text")
        .args(["analyze", "seg"])
        .output()
        .unwrap();
    assert!(stdout_str(&via_env).contains("verdict: Semisimple"));

    let flag_wins = bin()
        .current_dir(dir.path())
        .env("FACETSYM_FORMAT", "text")
        .args(["--format", "json", "analyze", "seg"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&flag_wins)).unwrap();
    assert_eq!(report["verdict"], "SEMISIMPLE");
}

#[test]
fn invalid_config_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--tol-residual", "-1", "analyze", "seg"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run_in(dir.path(), &["--max-dim", "0", "analyze", "seg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn degenerate_verdict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--deg-threshold", "1e3", "analyze", "seg"]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["verdict"], "DEGENERATE");
}

#[test]
fn high_precision_flag_tightens_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--precision", "high", "analyze", "pdp(1)"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    for p in report["points"].as_array().unwrap() {
        let r = p["residual"].as_f64().unwrap();
        assert!(r < 1e-25, "residual {r}");
    }
}
