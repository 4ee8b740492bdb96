use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schrodinger-lie"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn verify_case_is_deterministic() {
    let args = ["--seed", "11", "--format", "json", "verify-case", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["pass"], true);
}

#[test]
fn residual_exit_codes() {
    let d = r#"{"tau": 1, "chi": [0, 0]}"#;
    assert_eq!(run(&["residual", "0", d]).status.code(), Some(0));
    let failed = run(&["--format", "json", "residual", "t*x1", d]);
    assert_eq!(failed.status.code(), Some(1));
    assert!(json(&failed)["report"]["witness"].is_object());
    assert_eq!(run(&["residual", "t*", d]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "-1", "residual", "0", d]).status.code(), Some(2));
}

#[test]
fn tight_tolerance_fails_with_witness() {
    let out = run(&["--tol", "1e-30", "verify-case", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("witness"));
}

#[test]
fn bracket_and_invariants() {
    let d = r#"{"tau": "t", "chi": [0, 0]}"#;
    let p = r#"{"chi": ["t", 0]}"#;
    let out = run(&["--format", "json", "bracket", d, p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json(&out);

    let fields = r#"[{"sigma": 1, "chi": [0, 0]}, {"rho": 1, "chi": [0, 0]}]"#;
    let out = run(&["--format", "json", "invariants", fields]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["invariants"], serde_json::json!({"k0": 2, "k1": 0, "k2": 0, "k3": 0, "r0": 0}));
}

#[test]
fn transform_accepts_partial_specs() {
    let out = run(&["--format", "json", "transform", "0", r#"{"T": "t", "Sigma": "3*t"}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn groupoid_files_and_single_checks() {
    let out = run(&["--format", "json", "groupoid", "data/groupoid/kernel_sharing.json", "disjoint"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"], false);
    let out = run(&["groupoid", "data/groupoid/normalized.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["groupoid", "data/groupoid/normalized.json", "bogus"]).status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("schrodinger-lie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"tol": 1e-30}"#).unwrap();
    let path = cfg.to_str().unwrap();
    assert_eq!(run(&["--config", path, "verify-case", "7"]).status.code(), Some(1));
    assert_eq!(run(&["--config", path, "--tol", "1e-8", "verify-case", "7"]).status.code(), Some(0));
    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(run(&["--config", path, "verify-case", "7"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_case_is_an_input_error() {
    let out = run(&["--format", "json", "verify-case", "42"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
}
