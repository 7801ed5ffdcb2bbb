//! End-to-end runs of the binary: exit codes, JSON output, witness replay.

use std::path::Path;
use std::process::{Command, Output};

use semirad::report::{BatchReport, MatrixFile};
use semirad::ComplexMatrix;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semirad"))
}

fn write_matrix(path: &Path, m: &ComplexMatrix) {
    MatrixFile::from_matrix(m).save(path).unwrap();
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad stdout ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn compute_omega_jordan() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let t_path = dir.path().join("t.json");
    write_matrix(&a_path, &ComplexMatrix::identity(2));
    write_matrix(
        &t_path,
        &ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap(),
    );
    let out = bin()
        .args(["compute", "--weight"])
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "omega"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn compute_chain_report() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let t_path = dir.path().join("t.json");
    write_matrix(&a_path, &ComplexMatrix::diag_real(&[2.0, 1.0, 0.0]));
    write_matrix(
        &t_path,
        &ComplexMatrix::from_real_rows(&[
            vec![0.5, -1.0, 0.0],
            vec![1.5, 0.25, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap(),
    );
    let out = bin()
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "C_KIT"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["chain_id"], "C_KIT");
    assert_eq!(v["passed"], true);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn parse_error_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    std::fs::write(&a_path, "{ not json").unwrap();
    let out = bin()
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&a_path)
        .args(["--quantity", "omega"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precondition_failure_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let t_path = dir.path().join("t.json");
    // indefinite weight
    write_matrix(&a_path, &ComplexMatrix::diag_real(&[1.0, -1.0]));
    write_matrix(&t_path, &ComplexMatrix::identity(2));
    let out = bin()
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "omega"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // pair chain without the second operand
    write_matrix(&a_path, &ComplexMatrix::identity(2));
    let out = bin()
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "C_MORADI"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn violation_is_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let t_path = dir.path().join("t.json");
    write_matrix(&a_path, &ComplexMatrix::identity(2));
    write_matrix(
        &t_path,
        &ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap(),
    );
    // a negative slack turns the chain's equality cases into failures
    let out = bin()
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "C_THN", "--tol=-1e-3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn env_var_overrides_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let t_path = dir.path().join("t.json");
    write_matrix(&a_path, &ComplexMatrix::identity(2));
    write_matrix(
        &t_path,
        &ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap(),
    );
    let out = bin()
        .env("SEMIRAD_CMP_TOL", "-1e-3")
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "C_THN"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    let out = bin()
        .env("SEMIRAD_CMP_TOL", "not-a-number")
        .arg("compute")
        .arg("--weight")
        .arg(&a_path)
        .arg("--op")
        .arg(&t_path)
        .args(["--quantity", "C_THN"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_deterministic_report_and_witness_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("report1.json");
    let out2 = dir.path().join("report2.json");
    for out in [&out1, &out2] {
        let run = bin()
            .args([
                "verify", "--chains", "C_KIT,E_DIEZ", "--dims", "2,3", "--ranks", "mixed",
                "--trials", "25", "--seed", "11", "--out",
            ])
            .arg(out)
            .output()
            .unwrap();
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let mut r1 = BatchReport::load(&out1).unwrap();
    let mut r2 = BatchReport::load(&out2).unwrap();
    assert!(r1.all_passed);
    r1.timestamp.clear();
    r2.timestamp.clear();
    assert_eq!(r1.to_json(), r2.to_json());

    let witness_path = dir.path().join("witness.json");
    std::fs::write(
        &witness_path,
        serde_json::to_string(&r1.results[0].worst_witness).unwrap(),
    )
    .unwrap();
    let replay = bin()
        .arg("replay")
        .arg("--witness")
        .arg(&witness_path)
        .output()
        .unwrap();
    assert!(replay.status.success());
    let text = String::from_utf8_lossy(&replay.stdout);
    assert!(text.contains("PASS"), "{text}");
}

#[test]
fn sharpness_finds_small_margin() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sharp.json");
    let run = bin()
        .args([
            "sharpness", "--chain", "C_KIT", "--dim", "2", "--restarts", "5", "--seed", "7",
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["chain"], "C_KIT");
    let margin = v["best_margin"].as_f64().unwrap();
    assert!(margin.is_finite() && margin < 0.05, "margin {margin}");
}
