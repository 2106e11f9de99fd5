//! End-to-end tests of the binary: exit-code contract, file round trips,
//! and the shipped default configs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_omp-perturb"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn counterexample_files_round_trip_through_recover() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("inst");
    let out = run(&[
        "counterexample",
        "--k",
        "2",
        "--eta",
        "1.1",
        "--t0",
        "1.0",
        "--xi",
        "0.5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    for name in [
        "phi.csv",
        "phi_tilde.csv",
        "E.csv",
        "b.csv",
        "x.csv",
        "y_tilde.csv",
        "summary.json",
    ] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["failed"], serde_json::json!(true));
    assert_eq!(summary["omp_first_pick"], serde_json::json!(2));
    let delta = summary["delta"].as_f64().unwrap();
    assert!((delta - 0.4648).abs() < 5e-4);
    assert!(delta <= summary["delta_bound"].as_f64().unwrap() + 1e-12);

    // Feeding the written instance back into `recover` reproduces the
    // documented failure: the first pick is the extra (last) column.
    let out = run(&[
        "recover",
        out_dir.join("phi_tilde.csv").to_str().unwrap(),
        out_dir.join("y_tilde.csv").to_str().unwrap(),
        "--max-iter",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let first_row = text.lines().nth(1).expect("one iteration row");
    assert!(
        first_row.starts_with("1,2,"),
        "expected first pick = column 2, got: {first_row}"
    );
}

#[test]
fn counterexample_rejects_out_of_domain_eta() {
    let dir = tempdir().unwrap();
    let out = run(&[
        "counterexample",
        "--k",
        "2",
        "--eta",
        "1.5",
        "--xi",
        "0.1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr(&out));
}

#[test]
fn recover_exit_codes() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1.0,2.0\n3.0,xyz\n").unwrap();
    let good_vec = dir.path().join("y.csv");
    fs::write(&good_vec, "1.0\n2.0\n").unwrap();

    // Malformed CSV: exit 2, message names the line.
    let out = run(&["recover", bad.to_str().unwrap(), good_vec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "stderr: {}", stderr(&out));

    // Dimension mismatch: exit 3.
    let mat = dir.path().join("a.csv");
    fs::write(&mat, "1.0,0.0,0.0\n0.0,1.0,0.0\n0.0,0.0,1.0\n").unwrap();
    let out = run(&["recover", mat.to_str().unwrap(), good_vec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn recover_identity_demo_selects_in_magnitude_order() {
    let dir = tempdir().unwrap();
    let mat = dir.path().join("eye.csv");
    fs::write(&mat, "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n").unwrap();
    let y = dir.path().join("y.csv");
    fs::write(&y, "0.5\n-3.0\n0.0\n2.0\n").unwrap();
    let out = run(&[
        "recover",
        mat.to_str().unwrap(),
        y.to_str().unwrap(),
        "--max-iter",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let picks: Vec<&str> = text
        .lines()
        .skip(1)
        .take(3)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(picks, vec!["1", "3", "0"]);
}

#[test]
fn montecarlo_shipped_config_is_sound_and_deterministic() {
    let dir = tempdir().unwrap();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/n0_baseline.json");
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = run(&[
            "montecarlo",
            config.to_str().unwrap(),
            "--trials",
            "40",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let a = fs::read(out_a.join("trials.csv")).unwrap();
    let b = fs::read(out_b.join("trials.csv")).unwrap();
    assert_eq!(a, b);

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["violations"], serde_json::json!(0));
    assert_eq!(summary["trials"], serde_json::json!(40));
    assert!(summary["satisfied_count"].as_u64().unwrap() > 0);
}

#[test]
fn all_shipped_configs_run_sound() {
    let dir = tempdir().unwrap();
    let configs_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in fs::read_dir(&configs_dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let out_dir = dir.path().join(&name);
        let out = run(&[
            "montecarlo",
            path.to_str().unwrap(),
            "--trials",
            "30",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary["violations"], serde_json::json!(0), "{name}");
        assert!(
            summary["satisfied_count"].as_u64().unwrap() > 0,
            "{name}: no trial satisfied its condition"
        );
    }
}

#[test]
fn montecarlo_rejects_zero_trials() {
    let dir = tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    let base =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/n2_sweep.json"))
            .unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&base).unwrap();
    v["trials"] = serde_json::json!(0);
    fs::write(&config, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["montecarlo", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn montecarlo_respects_enumeration_cap() {
    let dir = tempdir().unwrap();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/n2_sweep.json");
    let out = run(&[
        "--cap",
        "3",
        "montecarlo",
        config.to_str().unwrap(),
        "--trials",
        "2",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("cap 3"), "stderr: {}", stderr(&out));
}

#[test]
fn ric_command_reports_identity() {
    let dir = tempdir().unwrap();
    let mat = dir.path().join("eye.csv");
    fs::write(&mat, "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    let out = run(&["ric", mat.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order = 2"));
    assert!(text.contains("delta = 0.0000000000000000e0"), "{text}");
}

#[test]
fn compare_prints_unit_ratio_at_the_boundary() {
    // delta_k = mu (k - 1) makes the error-bound ratio exactly 1.
    let out = run(&[
        "compare",
        "--mu",
        "0.1",
        "--delta-k",
        "0.3",
        "--delta-k1",
        "0.35",
        "--k",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("ratio r (isometry/coherence) = 1.000000"),
        "{text}"
    );
}

#[test]
fn cap_env_variable_is_honored() {
    let dir = tempdir().unwrap();
    let mat = dir.path().join("a.csv");
    // 6 columns, k = 3: 20 subsets, above a cap of 10.
    let rows: Vec<String> = (0..4)
        .map(|i| {
            (0..6)
                .map(|j| if i == j % 4 { "1.0" } else { "0.1" }.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    fs::write(&mat, rows.join("\n") + "\n").unwrap();
    let out = bin()
        .env("OMP_PERTURB_CAP", "10")
        .args(["ric", mat.to_str().unwrap(), "--k", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5), "stderr: {}", stderr(&out));
}
