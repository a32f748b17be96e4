use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use dbo_core::labcli::output::{read_snapshot, write_snapshot, CsvTable};
use dbo_core::labcli::{run_config_file, verify_report, RunStatus, MANIFEST_FILE, PRESETS};
use dbo_core::spectral::{Grid1D, PhysicalField};
use serde_json::Value;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn manifest(dir: &Path) -> Value {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE)).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "run-manifest");
    v["data"].clone()
}

/// Every file in `dir` except the wall-clock record.
fn contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "timing.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn kernel_bounds_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "k.json", r#"{"scenario": "kernel-bounds", "a": 1, "output_dir": "out"}"#);
    let outcome = run_config_file(&cfg);
    assert_eq!(outcome.status, RunStatus::Pass);
    let t = CsvTable::read(&tmp.path().join("out/kernel_sup.csv")).unwrap();
    assert_eq!(t.header, ["a", "lambda", "t", "measured", "closed_form", "rel_err"]);
    assert_eq!(t.rows.len(), 9);
    for row in &t.rows {
        assert_eq!(row[0].parse::<f64>().unwrap(), 1.0);
        assert!(row[5].parse::<f64>().unwrap() <= 1e-6);
    }
    let m = manifest(&tmp.path().join("out"));
    assert_eq!(m["tolerances"]["kernel.rel_err"], 1e-6);
    assert_eq!(m["status"], "pass");
}

#[test]
fn conservation_of_zero_data_is_trivially_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "z.json",
        r#"{"scenario": "conservation", "a": 0.5, "grid": {"n_points": 128, "half_length": 20},
            "stepper": {"dt": 0.01, "T": 0.2, "dealias_fraction": 0.6666666666666666},
            "data": {"preset": "zero"}, "diagnostics": {"s_list": [1], "r_list": [1], "snapshot_times": [0.1]},
            "output_dir": "out"}"#,
    );
    let outcome = run_config_file(&cfg);
    assert_eq!(outcome.status, RunStatus::Pass, "{:?}", outcome.manifest.checks);
    let t = CsvTable::read(&tmp.path().join("out/series.csv")).unwrap();
    assert_eq!(t.rows.len(), 21);
    for row in &t.rows {
        for cell in &row[1..] {
            assert_eq!(cell.parse::<f64>().unwrap(), 0.0);
        }
    }
    let snap = read_snapshot(&tmp.path().join("out/snapshot_000.bin")).unwrap();
    assert!(snap.samples().iter().all(|v| *v == 0.0));
}

#[test]
fn schema_violation_still_writes_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.json", r#"{"scenario": "conservation", "output_dir": "out"}"#);
    let outcome = run_config_file(&cfg);
    assert_eq!(outcome.status, RunStatus::Schema);
    assert_eq!(outcome.status.exit_code(), 3);
    let m = manifest(&tmp.path().join("out"));
    assert_eq!(m["status"], "schema");
    assert!(m["error"].as_str().unwrap().contains("missing field `a`"));

    let cfg = write_config(tmp.path(), "garbage.json", "{not json");
    let outcome = run_config_file(&cfg);
    assert_eq!(outcome.status, RunStatus::Schema);
    assert_eq!(manifest(tmp.path())["config"], "{not json");
}

#[test]
fn blow_up_records_the_guard_and_last_valid_time() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "b.json",
        r#"{"scenario": "conservation", "a": 0.25, "grid": {"n_points": 256, "half_length": 10},
            "stepper": {"dt": 0.5, "T": 20, "dealias_fraction": 1},
            "data": {"preset": "gaussian", "amplitude": 1000}, "output_dir": "out"}"#,
    );
    let outcome = run_config_file(&cfg);
    assert_eq!(outcome.status, RunStatus::RuntimeGuard);
    let m = manifest(&tmp.path().join("out"));
    assert_eq!(m["status"], "runtime-guard");
    let t = m["abort"]["last_valid_time"].as_f64().unwrap();
    assert!((0.0..20.0).contains(&t), "{t}");
    assert!(!m["abort"]["guard"].as_str().unwrap().is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("audits", r#"{"scenario": "inequality-audits", "a": 0.5, "seed": 3, "sweep": {"samples": 12}, "output_dir": "audits"}"#),
        (
            "barrier",
            r#"{"scenario": "moment-barrier", "a": 0.5, "grid": {"n_points": 1024, "half_length": 64},
                "stepper": {"dt": 0.01, "T": 0.5, "dealias_fraction": 0.6666666666666666},
                "data": {"preset": "gaussian-derivative", "order": 2},
                "diagnostics": {"r_list": [2.5, 3.0], "snapshot_times": [0.25, 0.5]}, "output_dir": "barrier"}"#,
        ),
    ] {
        let cfg = write_config(tmp.path(), &format!("{name}.json"), body);
        run_config_file(&cfg);
        let first = contents(&tmp.path().join(name));
        run_config_file(&cfg);
        let second = contents(&tmp.path().join(name));
        assert!(first.len() > 2);
        assert_eq!(first, second, "{name}");
    }
}

#[test]
fn growth_table_schema_and_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "m.json",
        r#"{"scenario": "mean-barrier", "a": 0.5, "flow": "linear",
            "grid": {"n_points": 2048, "half_length": 100.53096491487338},
            "data": {"preset": "unit-mean-gaussian"}, "output_dir": "out"}"#,
    );
    run_config_file(&cfg);
    let out = tmp.path().join("out");
    let growth = out.join("growth.csv");
    let t = CsvTable::read(&growth).unwrap();
    assert_eq!(t.header, ["t", "r", "R", "norm", "verdict"]);
    assert_eq!(t.rows.len(), 2 * 5);
    assert!(t.rows.iter().all(|r| ["saturating", "diverging", "borderline"].contains(&r[4].as_str())));

    let v = verify_report(&out.join(MANIFEST_FILE)).unwrap();
    assert!(v.inconsistent.is_empty(), "{v:?}");

    // A hand-edited verdict no longer follows from the stored norms.
    let text = fs::read_to_string(&growth).unwrap();
    let flipped = if text.contains("saturating") {
        text.replacen("saturating", "diverging", 1)
    } else {
        text.replacen("diverging", "saturating", 1)
    };
    fs::write(&growth, flipped).unwrap();
    let v = verify_report(&out.join(MANIFEST_FILE)).unwrap();
    assert_eq!(v.status, RunStatus::CheckFailure);
    assert_eq!(v.inconsistent.len(), 1, "{v:?}");
}

#[test]
fn verify_recomputes_check_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "k.json", r#"{"scenario": "kernel-bounds", "a": 0.5, "output_dir": "out"}"#);
    run_config_file(&cfg);
    let path = tmp.path().join("out").join(MANIFEST_FILE);
    assert_eq!(verify_report(&path).unwrap().status, RunStatus::Pass);

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["data"]["checks"][0]["observed"] = Value::from(0.5);
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let v = verify_report(&path).unwrap();
    assert_eq!(v.status, RunStatus::CheckFailure);
    assert_eq!(v.failed.len(), 1);
    assert_eq!(v.inconsistent.len(), 1);

    fs::write(&path, "[]").unwrap();
    assert!(verify_report(&path).is_err());
}

#[test]
fn snapshots_round_trip_and_feed_custom_data() {
    let tmp = tempfile::tempdir().unwrap();
    let grid = Grid1D::new(256, 30.0).unwrap();
    let u = PhysicalField::from_fn(&grid, |x| 0.3 * (-x * x / 4.0).exp() * (1.0 + x.sin())).unwrap();
    let snap = tmp.path().join("phi.bin");
    write_snapshot(&snap, &u).unwrap();
    let bytes = fs::read(&snap).unwrap();
    assert_eq!(&bytes[..8], b"DBOSNAP\0");
    assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1);
    assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 256);
    assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 30.0);
    assert_eq!(bytes.len(), 32 + 8 * 256);
    let back = read_snapshot(&snap).unwrap();
    assert_eq!(back.samples(), u.samples());

    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"scenario": "conservation", "a": 0.75, "grid": {"n_points": 256, "half_length": 30},
            "stepper": {"dt": 0.01, "T": 0.1, "dealias_fraction": 0.6666666666666666},
            "data": {"preset": "custom", "path": "phi.bin"}, "output_dir": "out"}"#,
    );
    let outcome = run_config_file(&cfg);
    assert_eq!(outcome.status, RunStatus::Pass, "{:?}", outcome.manifest);

    let cfg = write_config(
        tmp.path(),
        "d.json",
        r#"{"scenario": "conservation", "a": 0.75, "grid": {"n_points": 128, "half_length": 30},
            "data": {"preset": "custom", "path": "phi.bin"}, "output_dir": "out2"}"#,
    );
    assert_eq!(run_config_file(&cfg).status, RunStatus::Schema);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_dbolab");
    let tmp = tempfile::tempdir().unwrap();
    let listed = Command::new(exe).args(["presets", "list"]).output().unwrap();
    assert!(listed.status.success());
    let text = String::from_utf8(listed.stdout).unwrap();
    for p in PRESETS {
        assert!(text.contains(p), "{p}");
    }

    let good = write_config(tmp.path(), "k.json", r#"{"scenario": "kernel-bounds", "a": 1, "output_dir": "k"}"#);
    let bad = write_config(tmp.path(), "b.json", r#"{"scenario": "kernel-bounds", "a": 2, "output_dir": "b"}"#);
    let failing = write_config(
        tmp.path(),
        "f.json",
        // Smooth data has no observable smoothing rate: the fit is rejected.
        r#"{"scenario": "smoothing-rates", "a": 0.5, "grid": {"n_points": 65536, "half_length": 62.83185307179586},
            "data": {"preset": "gaussian"}, "sweep": {"window": [0.001, 0.01]}, "output_dir": "f"}"#,
    );
    let code = |args: &[&str]| Command::new(exe).args(args).output().unwrap().status.code();
    assert_eq!(code(&["run", good.to_str().unwrap()]), Some(0));
    assert_eq!(code(&["run", bad.to_str().unwrap()]), Some(3));
    assert_eq!(code(&["run", failing.to_str().unwrap()]), Some(2));
    let m = tmp.path().join("k").join(MANIFEST_FILE);
    assert_eq!(code(&["verify", m.to_str().unwrap()]), Some(0));
    let m = tmp.path().join("f").join(MANIFEST_FILE);
    assert_eq!(code(&["verify", m.to_str().unwrap()]), Some(2));
}
