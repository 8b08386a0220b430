use std::path::Path;
use std::process::{Command, Output};

use dispmap::report::claim_statement;
use serde_json::Value;

fn dispmap(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispmap"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn make_cyclic_writes_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out = dispmap(&["make", "cyclic", "--n", "5", "-o", "op.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let spec = json(&dir.path().join("op.json"));
    assert_eq!(spec["kind"], "cyclic_shift");
    assert_eq!(spec["n"], 5);
}

#[test]
fn make_projection_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(&dispmap(
            &[
                "make",
                "projection",
                "--n",
                "4",
                "--dimU",
                "2",
                "--seed",
                "7",
                "-o",
                "p.json"
            ],
            d
        )),
        0
    );
    let spec = json(&d.join("p.json"));
    let basis = matrix(&spec["basis"]);
    assert_eq!(basis.len(), 2);
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
            assert!((dot - f64::from(u8::from(i == j))).abs() < 1e-12);
        }
    }
    assert_eq!(code(&dispmap(&["analyze", "p.json", "-o", "a.json"], d)), 0);
    let report = json(&d.join("a.json"));
    assert_eq!(report["dim_d"], 2);
    assert_eq!(report["rank"], 2);
    // T = 1/2 P_{U^perp} = 1/2 (Id - R) for R = P_U
    let r = matrix(&report["r"]);
    let t = matrix(&report["t"]);
    for i in 0..4 {
        for j in 0..4 {
            let expected = 0.5 * (f64::from(u8::from(i == j)) - r[i][j]);
            assert!((t[i][j] - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn make_random_has_requested_norm() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "make",
        "random",
        "--n",
        "8",
        "--seed",
        "42",
        "--norm-cap",
        "0.95",
        "-o",
        "r.json",
    ];
    assert_eq!(code(&dispmap(&args, d)), 0);
    let spec = json(&d.join("r.json"));
    assert_eq!(spec["kind"], "matrix");
    let rows = matrix(&spec["rows"]);
    let m = nalgebra::DMatrix::from_fn(8, 8, |i, j| rows[i][j]);
    let norm = dispmap::numlin::operator_norm(&m);
    assert!((norm - 0.95).abs() < 1e-12, "{norm}");
    let out = dispmap(
        &["verify", "r.json", "--suite", "inverse", "-o", "v.json"],
        d,
    );
    assert_eq!(code(&out), 0);
    let v = json(&d.join("v.json"));
    for c in v["checks"].as_array().unwrap() {
        if c["check_id"] == "inverse.set_valued" || c["check_id"] == "inverse.moore_penrose" {
            assert!(c["residual"].as_f64().unwrap() <= 1e-9);
        }
    }
}

#[test]
fn analyze_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let specs = [
        (
            r#"{"kind":"projection","n":2,"basis":[[1.0,0.0]]}"#,
            [[0.0, 0.0], [0.0, 0.5]],
        ),
        (
            &format!(r#"{{"kind":"reflection","n":2,"basis":[[{h},{h}]]}}"#) as &str,
            [[0.0, 0.0], [0.0, 0.0]],
        ),
        (
            r#"{"kind":"neg_reflection","n":2,"basis":[[0.6,0.8]]}"#,
            [[0.0, 0.0], [0.0, 0.0]],
        ),
    ];
    for (i, (spec, expected)) in specs.iter().enumerate() {
        let path = d.join(format!("s{i}.json"));
        std::fs::write(&path, spec).unwrap();
        let out = dispmap(&["analyze", path.to_str().unwrap()], d);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let t = matrix(&report["t"]);
        for r in 0..2 {
            for c in 0..2 {
                assert!((t[r][c] - expected[r][c]).abs() < 1e-12, "spec {i}: {t:?}");
            }
        }
    }
}

#[test]
fn verify_cyclic_shift_passes_with_skew_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    dispmap(&["make", "cyclic", "--n", "3", "-o", "op.json"], d);
    let out = dispmap(&["verify", "op.json", "--suite", "all", "-o", "v.json"], d);
    assert_eq!(code(&out), 0);
    let v = json(&d.join("v.json"));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 14);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(checks.iter().any(|c| c["check_id"] == "isometry.t_skew"));
    assert!(v["skipped"].as_array().unwrap().is_empty());
}

#[test]
fn verify_identity_reports_skips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("id.json"),
        r#"{"kind":"matrix","n":3,"rows":[[1,0,0],[0,1,0],[0,0,1]]}"#,
    )
    .unwrap();
    let out = dispmap(&["verify", "id.json", "-o", "v.json"], d);
    assert_eq!(code(&out), 0);
    let v = json(&d.join("v.json"));
    let skipped: Vec<_> = v["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["check_id"].as_str().unwrap())
        .collect();
    assert!(skipped.contains(&"inverse.closed_range_selection_bound"));
}

#[test]
fn failing_check_exits_one_and_still_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    dispmap(
        &["make", "random", "--n", "6", "--seed", "3", "-o", "r.json"],
        d,
    );
    // at tol 1e-2 the 1e-3 uniqueness perturbations are no longer rejected
    let out = dispmap(&["verify", "r.json", "--tol", "1e-2", "-o", "v.json"], d);
    assert_eq!(code(&out), 1);
    let v = json(&d.join("v.json"));
    assert_eq!(v["pass"], false);
    let failed: Vec<_> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(
        failed[0]["check_id"],
        "inverse.uniqueness_perturbations_rejected"
    );
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("big.json"),
        r#"{"kind":"matrix","n":2,"rows":[[2,0],[0,1]]}"#,
    )
    .unwrap();
    assert_eq!(code(&dispmap(&["analyze", "big.json"], d)), 3);
    assert_eq!(code(&dispmap(&["verify", "big.json"], d)), 3);
    std::fs::write(
        d.join("bad.json"),
        r#"{"kind":"projection","n":2,"basis":[[1,1]]}"#,
    )
    .unwrap();
    assert_eq!(code(&dispmap(&["analyze", "bad.json"], d)), 2);
    std::fs::write(d.join("junk.json"), "not json").unwrap();
    assert_eq!(code(&dispmap(&["analyze", "junk.json"], d)), 2);
    assert_eq!(code(&dispmap(&["analyze", "missing.json"], d)), 2);
    assert_eq!(
        code(&dispmap(
            &["make", "random", "--n", "3", "--norm-cap", "1.5"],
            d
        )),
        2
    );
    assert_eq!(
        code(&dispmap(&["gallery", "--n", "3", "--dimU", "3"], d)),
        2
    );
}

#[test]
fn gallery_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dispmap(
        &["gallery", "--n", "6", "--dimU", "3", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let g: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(g["examples"].as_array().unwrap().len(), 4);
    assert_eq!(g["isometries"].as_array().unwrap().len(), 7);
    assert_eq!(g["discrepancies"].as_array().unwrap().len(), 1);
    let blocks = g["examples"]
        .as_array()
        .unwrap()
        .iter()
        .chain(g["isometries"].as_array().unwrap());
    for b in blocks {
        for c in b["checks"].as_array().unwrap() {
            assert!(c["residual"].as_f64().unwrap() <= 1e-12, "{c}");
        }
    }
    let out = dispmap(
        &["gallery", "--n", "2", "--dimU", "1", "--seed", "0"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
}

#[test]
fn reports_are_byte_identical_and_claims_are_known() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    dispmap(
        &["make", "random", "--n", "5", "--seed", "11", "-o", "r.json"],
        d,
    );
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| dispmap(&["verify", "r.json", "--seed", "4"], d).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a1 = dispmap(&["analyze", "r.json", "--format", "text"], d).stdout;
    let a2 = dispmap(&["analyze", "r.json", "--format", "text"], d).stdout;
    assert_eq!(a1, a2);

    let v: Value = serde_json::from_slice(&runs[0]).unwrap();
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check_id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
    for c in v["checks"].as_array().unwrap() {
        assert!(
            claim_statement(c["claim"].as_str().unwrap()).is_some(),
            "{c}"
        );
    }
}

#[test]
fn analyze_numbers_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    dispmap(
        &["make", "random", "--n", "4", "--seed", "9", "-o", "r.json"],
        d,
    );
    dispmap(&["analyze", "r.json", "-o", "a.json"], d);
    let spec = matrix(&json(&d.join("r.json"))["rows"]);
    let report = matrix(&json(&d.join("a.json"))["r"]);
    assert_eq!(spec, report);
}
