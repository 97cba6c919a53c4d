use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinxfer"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(config: Option<&Path>, args: &[&str]) -> Output {
    let mut c = bin();
    if let Some(p) = config {
        c.arg("--config").arg(p);
    }
    c.args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn ideal_case_a_run() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.json", r#"{"noise": "ideal", "samples": 100}"#);
    let o = run(Some(&cfg), &["run"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("round_trip_fidelity: 1.000000\n"));
    assert!(text.contains("mean_fidelity: 1.000000 ± 0.000000\n"));
}

#[test]
fn degenerate_run_reports_classical_mean() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "d.json", r#"{"case": "degenerate", "noise": "ideal", "samples": 20000}"#);
    let o = run(Some(&cfg), &["run"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o).lines().find(|l| l.starts_with("mean_fidelity: ")).unwrap().to_string();
    assert!(line.starts_with("mean_fidelity: 0.66"), "{line}");
    assert!(line.contains(" ± "));
}

#[test]
fn missing_config_is_a_config_error() {
    let o = run(Some(Path::new("/nonexistent/scenario.json")), &["run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: cannot access"));
}

#[test]
fn all_config_errors_are_listed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "bad.json",
        r#"{"case": "B", "field": {"orientation": "normal"}, "absorption_efficiency": 3, "storage_time_ns": -2}"#,
    );
    for cmd in ["levels", "run", "tomography"] {
        let o = run(Some(&cfg), &[cmd]);
        assert_eq!(o.status.code(), Some(2));
        let e = stderr(&o);
        for field in ["field.orientation", "absorption_efficiency", "storage_time_ns"] {
            assert!(e.contains(&format!("  - {field}: ")), "{field} missing from {e}");
        }
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(None, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(None, &["--format", "xml", "levels"]).status.code(), Some(2));
    assert_eq!(run(None, &["sweep", "--param", "b_tesla"]).status.code(), Some(2));
    assert_eq!(run(None, &["check-dot", "--capacitance", "1e-18"]).status.code(), Some(2));
    assert_eq!(run(None, &["--help"]).status.code(), Some(0));
}

#[test]
fn levels_reports_splitting_and_warnings() {
    let o = run(None, &["levels"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valence_splitting_ueV: 513.429466\n"));

    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "zero.json", r#"{"field": {"b_tesla": 0}}"#);
    let o = run(Some(&zero), &["levels"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: B = 0 T"));

    let gaas = write(&dir, "gaas.json", r#"{"material": "GaAs-QW"}"#);
    let o = run(Some(&gaas), &["levels"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("HeavyHoleTopmost"));

    let windowed = write(&dir, "w.json", r#"{"window": {"bandwidth_ueV": 600}}"#);
    let text = stdout(&run(Some(&windowed), &["levels"]));
    assert!(text.contains("  valence_resolved: false\n") && text.contains("  passes: false\n"), "{text}");
}

#[test]
fn catalog_file_is_resolved_relative_to_config() {
    let dir = TempDir::new().unwrap();
    write(&dir, "materials.json", r#"{"materials": [{"name": "Soft-QW", "base": "InAs/GaAs-QW", "g_lh": 4.0}]}"#);
    let cfg = write(&dir, "c.json", r#"{"catalog": "materials.json", "material": "Soft-QW"}"#);
    let o = run(Some(&cfg), &["levels"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("material: Soft-QW\n"));
    assert!(text.contains(&format!("valence_splitting_ueV: {:.6}\n", 4.0 * 57.8838180)));
}

#[test]
fn sweep_csv_shape() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "b.json", r#"{"case": "B", "noise": "ideal", "hadamard_time_ns": 0.1786193378}"#);
    let header = "param,value,mean_fidelity,stderr,success_prob,leakage,hole_purity";
    let o = run(
        Some(&cfg),
        &["sweep", "--param", "b_tesla", "--from", "0.1", "--to", "1.0", "--steps", "10", "--samples", "200"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], header);
    assert!(lines[10].starts_with("field.b_tesla,1.00000000,1.000000,"));

    let o = run(Some(&cfg), &["sweep", "--param", "b_tesla", "--from", "0.1", "--to", "1.0", "--steps", "0"]);
    assert_eq!(stdout(&o), format!("{header}\n"));

    let o = run(Some(&cfg), &["sweep", "--param", "nonsense", "--from", "0", "--to", "1", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bandwidth_sweep_leakage_is_monotone() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "w.json", r#"{"noise": "ideal", "window": {"bandwidth_ueV": 50}}"#);
    let o = run(
        Some(&cfg),
        &["sweep", "--param", "bandwidth_ueV", "--from", "50", "--to", "1500", "--steps", "12", "--samples", "100"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let leak: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(leak.len(), 12);
    assert!(leak.windows(2).all(|w| w[1] >= w[0]), "{leak:?}");
    assert!(leak[11] > leak[0]);
}

#[test]
fn tomography_of_dephasing_scenario() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "t.json",
        r#"{"noise": {"t2_iii_v_ns": "inf", "t2_si_ns": 1000, "transport_time_ns": 0}, "storage_time_ns": 1000}"#,
    );
    let o = run(Some(&cfg), &["tomography"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let l = 0.5 * (-1.0f64).exp();
    assert!(
        text.contains(&format!(
            "  [0.500000000+0.00000000i, 0.00000000+0.00000000i, 0.00000000+0.00000000i, {l:.9}+0.00000000i]"
        )),
        "{text}"
    );
    assert!(text.contains("cptp: true\n"));
}

#[test]
fn hand_edited_choi_is_not_cptp() {
    let dir = TempDir::new().unwrap();
    let m = write(
        &dir,
        "choi.json",
        r#"{"matrix": [[[0.5,0],[0,0],[0,0],[0.8,0]],
                       [[0,0],[0,0],[0,0],[0,0]],
                       [[0,0],[0,0],[0,0],[0,0]],
                       [[0.8,0],[0,0],[0,0],[0.5,0]]]}"#,
    );
    let o = run(None, &["tomography", "--choi", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cptp: false\n"));
    let bad = write(&dir, "bad.json", "[[[1, 0], [0, 0]]]");
    assert_eq!(run(None, &["tomography", "--choi", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn check_dot_lines() {
    let args = |r: &str, t: &str| {
        vec!["check-dot", "--capacitance", "1e-17", "--resistance", r, "--confinement", "2000", "--temperature", t]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let o = bin().args(args("26000", "0.001")).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.contains(": PASS (")).count(), 3, "{text}");
    let o = bin().args(args("25000", "0.001")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("resistance: FAIL (measured 25000.0000 ohm, threshold 25812.8075 ohm)"));

    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "dot.json",
        r#"{"dot": {"capacitance_F": 1e-18, "tunnel_resistance_ohm": 3e4, "confinement_ueV": 5000, "temperature_K": 4}}"#,
    );
    assert_eq!(run(Some(&cfg), &["check-dot"]).status.code(), Some(0));
    assert_eq!(run(Some(&cfg), &["check-dot", "--resistance", "2e4"]).status.code(), Some(1));
}

#[test]
fn out_file_and_stage_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.json", r#"{"samples": 50}"#);
    let out = dir.path().join("report.csv");
    let stages = dir.path().join("stages.csv");
    let o = bin()
        .arg("--config")
        .arg(&cfg)
        .args(["--format", "csv", "--out"])
        .arg(&out)
        .arg("run")
        .arg("--stages-csv")
        .arg(&stages)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.starts_with("key,value\ncase,A\n"));
    assert!(report.contains("\nmean_fidelity_stderr,"));
    let s = std::fs::read_to_string(&stages).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "stage,fidelity,mean_fidelity");
    assert_eq!(lines.len(), 5);
}

#[test]
fn json_like_output_parses() {
    let o = run(None, &["--format", "json-like", "run", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["case"], "A");
    assert!(v["tomography"]["cptp"].as_bool().unwrap());
    let f = v["round_trip_fidelity"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&f));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "d.json", r#"{"case": "degenerate", "seed": 1, "samples": 500}"#);
    let mean = |extra: &[&str]| {
        let mut args = vec!["run"];
        args.extend_from_slice(extra);
        let o = run(Some(&cfg), &args);
        stdout(&o).lines().find(|l| l.starts_with("mean_fidelity")).unwrap().to_string()
    };
    assert_eq!(mean(&[]), mean(&["--seed", "1"]));
    assert_ne!(mean(&[]), mean(&["--seed", "2"]));
}
