//! Binary-level interface tests: invocation forms, CSV/manifest layout and
//! exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nmwork"))
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("nmwork-test-{}-{name}", std::process::id()));
    p
}

const BASE_HEADER: &str =
    "t,H_S,H_Q,H_SQ,cond_entropy,coherent_info,mutual_info,w_ex_kTln2,cp_divisible,p_divisible";

#[test]
fn preset_run_writes_csv_and_manifest() {
    let out = tmp_path("fig2a.csv");
    let status = bin()
        .args(["run", "--preset", "fig2a", "--out"])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());

    let csv = std::fs::read_to_string(&out).expect("csv written");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), BASE_HEADER);
    assert_eq!(csv.lines().count(), 501);
    // First row: t = 0, w_ex = 2, divisibility flags on.
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 10);
    assert_eq!(fields[0], "0");
    let w_ex: f64 = fields[7].parse().unwrap();
    assert!((w_ex - 2.0).abs() < 1e-9);
    assert_eq!(fields[8], "1");
    assert_eq!(fields[9], "1");

    let manifest_path = format!("{}.manifest.json", out.display());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).expect("manifest written"))
            .expect("manifest is JSON");
    assert_eq!(manifest["preset"], "fig2a");
    assert_eq!(manifest["config"]["model"], "pauli");
    assert_eq!(manifest["config"]["steps"], 500);
    assert!(manifest["duration_seconds"].as_f64().unwrap() >= 0.0);

    std::fs::remove_file(&out).ok();
    std::fs::remove_file(&manifest_path).ok();
}

#[test]
fn pbg_run_appends_g_abs_column() {
    let out = tmp_path("pbg.csv");
    let status = bin()
        .args([
            "run", "--model", "pbg", "--detuning", "-1", "--beta", "1", "--t-max", "2",
            "--steps", "20", "--scenario", "system", "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).expect("csv written");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), format!("{BASE_HEADER},g_abs"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 11);
    // Divisibility columns are empty for pbg; |G(0)| = 1.
    assert_eq!(first[8], "");
    assert_eq!(first[9], "");
    let g0: f64 = first[10].parse().unwrap();
    assert!((g0 - 1.0).abs() < 1e-6);
    std::fs::remove_file(&out).ok();
    std::fs::remove_file(format!("{}.manifest.json", out.display())).ok();
}

#[test]
fn temperature_flag_appends_joules_column() {
    let out = tmp_path("joules.csv");
    let status = bin()
        .args([
            "run", "--model", "ising", "--field", "0.9", "--coupling", "0.1", "--spins", "100",
            "--t-max", "1", "--steps", "5", "--temperature", "300", "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).expect("csv written");
    let header = csv.lines().next().unwrap();
    assert_eq!(header, format!("{BASE_HEADER},w_ex_joules"));
    // w_ex(0) = 2 kT ln2 at 300 K.
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let joules: f64 = first[10].parse().unwrap();
    let expected = 2.0 * 1.380_649e-23 * 300.0 * std::f64::consts::LN_2;
    assert!((joules - expected).abs() / expected < 1e-12);
    std::fs::remove_file(&out).ok();
    std::fs::remove_file(format!("{}.manifest.json", out.display())).ok();
}

#[test]
fn pauli_tanh_run_via_flags() {
    let out = tmp_path("tanh.csv");
    let status = bin()
        .args([
            "run", "--model", "pauli", "--lambda", "1", "--omega", "0.5", "--rate3", "tanh",
            "--t-max", "10", "--steps", "50", "--scenario", "memory", "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).expect("csv written");
    // Monotone decay: last w_ex below first.
    let w = |line: &str| line.split(',').nth(7).unwrap().parse::<f64>().unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(w(rows.last().unwrap()) < w(rows.first().unwrap()));
    std::fs::remove_file(&out).ok();
    std::fs::remove_file(format!("{}.manifest.json", out.display())).ok();
}

#[test]
fn invalid_parameters_exit_code_one() {
    let out = tmp_path("invalid.csv");
    // Negative steps / missing grid.
    let status = bin()
        .args(["run", "--model", "pauli", "--out"])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(1));

    let status = bin()
        .args(["run", "--preset", "nope", "--out"])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(1));

    // Bad ising spin count.
    let status = bin()
        .args([
            "run", "--model", "ising", "--spins", "3", "--t-max", "1", "--steps", "5", "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(1));
}

#[test]
fn io_failure_exit_code_three() {
    let status = bin()
        .args(["run", "--preset", "fig2a", "--out", "/nonexistent-dir/x.csv"])
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(3));
}

#[test]
fn verify_subcommand_passes() {
    let output = bin().arg("verify").output().expect("binary runs");
    assert!(output.status.success(), "verify failed:\n{}", String::from_utf8_lossy(&output.stdout));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.lines().any(|l| l.starts_with("PASS\t")));
    assert!(!text.contains("\nFAIL\t"));
    assert!(text.trim_end().ends_with("checks"));
}

#[test]
fn preset_runs_are_byte_identical() {
    let out_a = tmp_path("det-a.csv");
    let out_b = tmp_path("det-b.csv");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["run", "--preset", "fig3b", "--out"])
            .arg(out)
            .status()
            .expect("binary runs");
        assert!(status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b);
    for out in [&out_a, &out_b] {
        std::fs::remove_file(out).ok();
        std::fs::remove_file(format!("{}.manifest.json", out.display())).ok();
    }
}
