use std::process::Command;

fn cubic7(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_cubic7")).args(args).output().unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into(), String::from_utf8_lossy(&o.stderr).into())
}

#[test]
fn list_suites_names_everything() {
    let (code, out, _) = cubic7(&["list-suites"]);
    assert_eq!(code, 0);
    for s in ["invariants", "git-c7", "git-f21", "singular", "table2", "table3", "hilbert", "quaternion", "invariant-ring"] {
        assert!(out.contains(s), "{s}");
    }
}

#[test]
fn verify_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let (code, _, err) = cubic7(&["verify", "git-f21", "invariant-ring", "--seed", "3", "--out", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["seed"], 3);
    let (code, out, _) = cubic7(&["verify", "git-f21", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("suite,seed,bound,check,verdict"));
}

#[test]
fn unknown_suite_fails() {
    let (code, _, err) = cubic7(&["verify", "nope"]);
    assert_ne!(code, 0);
    assert!(err.contains("unknown suite"));
}

#[test]
fn config_file_and_strict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# flagged label row\nsuites = table2\nbound.table2 = 2\n").unwrap();
    let (code, _, err) = cubic7(&["--config", cfg.to_str().unwrap(), "verify"]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("flagged"));
    let (code, _, _) = cubic7(&["--config", cfg.to_str().unwrap(), "verify", "--strict"]);
    assert_eq!(code, 1);
    std::fs::write(&cfg, "colour = red\n").unwrap();
    let (code, _, err) = cubic7(&["--config", cfg.to_str().unwrap(), "verify", "git-f21"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"));
}

#[test]
fn git_sweep_outputs() {
    let (code, out, _) = cubic7(&["git-sweep", "--family", "f21", "--emit", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 17);
    let (code, out, _) = cubic7(&["git-sweep", "--family", "c7", "--emit", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 256);
}

#[test]
fn export_plane_formats() {
    let (code, out, _) = cubic7(&["export-plane", "--grid", "0,1,0,1,1/2"]);
    assert_eq!(code, 0);
    assert!(out.contains("1,1,A2 orbit"));
    assert!(out.contains(r#""[0,0,1,1]",,"point [0,0,1,1]""#));
    let (code, out, _) = cubic7(&["export-plane", "--grid", "-2,2,-2,2,1", "--emit", "svg"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg"));
    let (code, _, _) = cubic7(&["export-plane", "--grid", "0,1"]);
    assert_ne!(code, 0);
}

#[test]
fn arith_verbs() {
    let (code, out, _) = cubic7(&["arith", "verify-table3"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"klein_four\": true"));
    let (code, out, _) = cubic7(&["arith", "hilbert-roundtrip", "--count", "5", "--height", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"roundtrip_ok\": 5"));
    let (code, _, _) = cubic7(&["arith", "quat-embed", "--box", "6"]);
    assert_eq!(code, 0);
    let (code, out, err) = cubic7(&["arith", "verify-table2"]);
    assert_eq!(code, 0);
    assert!(err.contains("flagged"));
    assert!(out.contains("corrected_labels"));
}
