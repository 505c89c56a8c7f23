use std::process::Command;

fn qtrans() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qtrans"))
}

#[test]
fn repr_check_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = qtrans().args(["repr-check", "--N", "16", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(dir.path().join("repr-check.json")).unwrap();
    assert_eq!(written, String::from_utf8(out.stdout).unwrap());
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["N"], 16);
    assert!(v["anchors"].as_array().unwrap().iter().any(|a| a == "eq1_representation"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["nonsense"],
        vec!["repr-check", "--M", "7"],
        vec!["counterexample", "--N", "64"],
        vec!["repr-check", "--seed", "minus-one"],
    ] {
        let out = qtrans().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_check_exits_with_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "x1,y1\n0,0\n0,1e-7\n").unwrap();
    let out = qtrans()
        .args(["independence", "--N", "32", "--operator", "p0", "--points"])
        .arg(&pts)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed"][0], "margin");
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));
}

#[test]
fn independence_with_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "x1,y1\n0,0\n0.5,0\n0,0.5\n-0.4,-0.4\n").unwrap();
    let out = qtrans()
        .args(["independence", "--n", "1", "--N", "64", "--operator", "p0", "--points"])
        .arg(&pts)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["metrics"]["margin"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "N = 12\nseed = 5\n").unwrap();
    let out = qtrans().args(["repr-check", "--seed", "9", "--config"]).arg(&cfg).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["params"]["N"], 12);
    assert_eq!(v["params"]["seed"], 9);

    std::fs::write(&cfg, "N = 12\nshade = grey\n").unwrap();
    let strict = qtrans().args(["repr-check", "--strict", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(strict.status.code(), Some(2));
    let lenient = qtrans().args(["repr-check", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(lenient.status.code(), Some(0));
}

#[test]
fn counterexample_writes_sidecars_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = qtrans()
        .args(["counterexample", "--N", "128", "--nodes", "2000", "--dump", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["metrics"]["residual_rel"]["value"].as_f64().unwrap() < 5e-2);
    for f in ["curve.csv", "measure.csv", "spectrum.csv", "spectrum_fit.json", "counterexample.op", "counterexample.op.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }

    let fit = qtrans()
        .args(["decay-fit", "--N", "128", "--operator"])
        .arg(dir.path().join("counterexample.op"))
        .output()
        .unwrap();
    assert_eq!(fit.status.code(), Some(0));
    let w: serde_json::Value = serde_json::from_slice(&fit.stdout).unwrap();
    assert_eq!(w["metrics"]["decay_exponent"], v["metrics"]["decay_exponent"]);
}

#[test]
fn zero_scan_reports_components() {
    let out = qtrans().args(["zero-scan", "--M", "64"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metrics"]["components"], 1);
}
