//! CLI integration tests: subcommand behavior, exit codes, emitted files.

use std::path::Path;
use std::process::{Command, Output};

fn reference_config(pulse: &str, extra: &str) -> String {
    format!(
        r#"{{
            "device": {{
                "lambda_nm": 786.0, "n_c": 3.5, "r": 0.992,
                "lc_convention": "half-wave",
                "a_nm": 50.0, "a_B_nm": 12.0, "eps_r": 12.9,
                "delta_p_meV": 1.001
            }},
            "pulse": {pulse},
            "physics": {{ "gamma_meV": 3.0, "v_ueV": 2.0 }}{extra}
        }}"#
    )
}

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let config_path = dir.join("config.json");
    std::fs::write(&config_path, config).unwrap();
    let out_dir = dir.join("out");
    Command::new(env!("CARGO_BIN_EXE_polgate"))
        .args(args)
        .args(["--config", config_path.to_str().unwrap()])
        .args(["--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap()
}

#[test]
fn device_command_emits_derived_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &reference_config(r#"{ "omega_peak_meV": 1.0, "tau_ps": 5.0 }"#, ""),
        &["device"],
    );
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/device.json")).unwrap())
            .unwrap();
    let tau_photon = json["tau_photon_ps"].as_f64().unwrap();
    let tau_polariton = json["tau_polariton_ps"].as_f64().unwrap();
    assert_eq!(tau_polariton, 2.0 * tau_photon);
    // derived V sits within a factor 2 of the quoted 2 ueV
    let v = json["v_ueV"].as_f64().unwrap();
    assert!(v > 1.0 && v < 4.0, "V = {v}");
    let text = std::fs::read_to_string(dir.path().join("out/device.txt")).unwrap();
    assert!(text.contains("vs quoted 2 ueV"));
}

#[test]
fn invalid_reflectivity_exits_one_naming_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let config = reference_config(r#"{ "omega_peak_meV": 1.0, "tau_ps": 5.0 }"#, "")
        .replace("\"r\": 0.992", "\"r\": 1.2");
    let out = run(dir.path(), &config, &["device"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("reflectivity") && stderr.contains("(0, 1)"),
        "stderr: {stderr}"
    );
}

#[test]
fn fidelity_command_no_drive_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &reference_config(r#"{ "omega_peak_meV": 0.0, "tau_ps": 5.0 }"#, ""),
        &["fidelity"],
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/gate_report.json")).unwrap(),
    )
    .unwrap();
    let f = report["fidelity"].as_f64().unwrap();
    assert!((f - 0.25).abs() < 1e-12);
    assert!(dir.path().join("out/phases.csv").exists());
}

#[test]
fn trace_command_emits_three_trajectories_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &reference_config(r#"{ "omega_peak_meV": 0.0, "tau_ps": 4.0 }"#, ""),
        &["trace"],
    );
    assert!(out.status.success());
    for name in [
        "trajectory_up_up.csv",
        "trajectory_down_down.csv",
        "trajectory_up_down.csv",
    ] {
        let text = std::fs::read_to_string(dir.path().join("out").join(name)).unwrap();
        // zero drive: all alpha samples are exactly zero
        for line in text.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[1], "0");
            assert_eq!(fields[2], "0");
        }
    }
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/trace_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["leakage"]["max_separation"].as_f64().unwrap(), 0.0);
    assert!(summary["leakage"]["within_noise"].as_bool().unwrap());
}

#[test]
fn sweep_command_single_point_no_drive() {
    let dir = tempfile::tempdir().unwrap();
    let config = reference_config(
        r#"{ "omega_peak_meV": 0.0, "tau_ps": 3.0 }"#,
        r#", "sweep": { "tau_ps": [3.0, 3.0], "tau_count": 1, "omega_meV": [0.0, 0.0], "omega_count": 1 }"#,
    );
    let out = run(dir.path(), &config, &["sweep"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "tau_ps,omega_meV,fidelity");
    assert_eq!(lines[1], "3,0,0.25");
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/sweep_report.json")).unwrap(),
    )
    .unwrap();
    assert!(!report["reaches_0_9999"].as_bool().unwrap());
}

#[test]
fn optimize_command_flat_surface_converges_with_power() {
    let dir = tempfile::tempdir().unwrap();
    // V = 0 makes the landscape flat at 0.25
    let config = reference_config(r#"{ "omega_peak_meV": 0.5, "tau_ps": 2.0 }"#, "")
        .replace("\"v_ueV\": 2.0", "\"v_ueV\": 0.0");
    let out = run(dir.path(), &config, &["optimize"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let optimum: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/optimum.json")).unwrap(),
    )
    .unwrap();
    assert!(optimum["converged"].as_bool().unwrap());
    assert!((optimum["fidelity"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(optimum["pump_power_mw"].as_f64().unwrap() > 0.0);
    assert!(optimum["report"]["fidelity"].as_f64().is_some());
}

#[test]
fn verify_command_small_fixture_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = reference_config(
        r#"{ "omega_peak_meV": 1.0, "tau_ps": 10.0 }"#,
        r#", "oracle": { "n_max": 24, "amplitude_scale": 1.0 }"#,
    );
    let out = run(dir.path(), &config, &["verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/verify_report.json")).unwrap(),
    )
    .unwrap();
    assert!(report["passed"].as_bool().unwrap());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("all tolerances met"));
}

#[test]
fn verify_command_coarse_grid_exits_one_naming_step_rule() {
    let dir = tempfile::tempdir().unwrap();
    let config = reference_config(
        r#"{ "omega_peak_meV": 1.0, "tau_ps": 10.0, "n_samples": 101 }"#,
        r#", "oracle": { "n_max": 24 }"#,
    );
    let out = run(dir.path(), &config, &["verify"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("step rule"), "stderr: {stderr}");
}

#[test]
fn missing_config_file_exits_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_polgate"))
        .args(["device", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
