use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FAST: &str = "record_len = 65536\nn_trials = 60\nn_cal = 50\n";

fn kljn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kljn")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn columns(tsv: &str) -> Vec<Vec<f64>> {
    let mut cols = vec![Vec::new(); 7];
    for line in tsv.lines().skip(1) {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields.len(), 7);
        for (c, f) in cols.iter_mut().zip(fields) {
            c.push(f.parse().unwrap());
        }
    }
    cols
}

fn jump_ratio(col: &[f64], at: usize) -> f64 {
    let mut steps: Vec<f64> = col.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let jump = steps[at - 1];
    steps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    jump / steps[steps.len() / 2]
}

#[test]
fn tables_write_one_csv_per_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FAST);
    let out = dir.path().join("tables");
    let o = kljn(&["tables", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for n in 1..=4 {
        let csv = fs::read_to_string(out.join(format!("scenario_{n}.csv"))).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "scenario,tau_s,p_ev,se_v,p_ei,se_i,n,loosened_fraction");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with(&format!("{n},1.000000e-5,")));
        assert!(out.join(format!("scenario_{n}_meta.txt")).exists());
    }
    let echoed = fs::read_to_string(out.join("effective_config.txt")).unwrap();
    assert!(echoed.contains("master_seed = 4"));
    assert!(echoed.contains("n_trials = 60"));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("  A  ") && stdout.contains("  P  "));
}

#[test]
fn tables_are_deterministic_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FAST);
    let mut results = Vec::new();
    for (name, jobs) in [("a", "1"), ("b", "1"), ("c", "3")] {
        let out = dir.path().join(name);
        let o = kljn(&[
            "tables", "--config", &cfg, "--scenario", "2", "--jobs", jobs, "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(!out.join("scenario_1.csv").exists());
        results.push(fs::read(out.join("scenario_2.csv")).unwrap());
    }
    assert_eq!(results[0], results[1]);
    assert_eq!(results[0], results[2]);
}

#[test]
fn trials_flag_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FAST);
    let out = dir.path().join("t");
    let o = kljn(&["tables", "--config", &cfg, "--scenario", "1", "--trials", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out.join("scenario_1.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().split(',').nth(6) == Some("7"));
}

#[test]
fn waveform_dumps_show_the_first_arrival() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "record_len = 65536\n");
    let out = dir.path().join("w");
    let mut ratios = Vec::new();
    for scenario in ["1", "4"] {
        let o = kljn(&["waveforms", "--config", &cfg, "--scenario", scenario, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = fs::read_to_string(out.join(format!("waveforms_scenario_{scenario}.tsv"))).unwrap();
        assert_eq!(text.lines().next().unwrap(), "time_s\tugen_a\tugen_b\tv_a\tv_b\ti_a\ti_b");
        let cols = columns(&text);
        assert_eq!(cols[0].len(), 200);
        ratios.push(jump_ratio(&cols[3], 100));
    }
    assert!(ratios[0] > 10.0, "{ratios:?}");
    assert!(ratios[1] <= 10.0, "{ratios:?}");
}

#[test]
fn silent_generators_give_zero_dump() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "record_len = 65536\ntemperature = 0\n");
    let out = dir.path().join("z");
    let o = kljn(&["waveforms", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cols = columns(&fs::read_to_string(out.join("waveforms_scenario_1.tsv")).unwrap());
    assert!(cols[1..].iter().flatten().all(|&x| x == 0.0));
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for (text, key) in [("z0 = 0\n", "z0"), ("colour = blue\n", "colour"), ("r_h = 2e3\n", "r_h")] {
        let cfg = write_config(dir.path(), text);
        let o = kljn(&["validate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains(key));
    }
    let o = kljn(&["tables", "--scenario", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn short_steady_state_run_names_the_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "steady_duration = 0.05\n");
    let o = kljn(&["validate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0.2"));
}

#[test]
fn validate_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    let o = kljn(&["validate", "--out", out.to_str().unwrap()]);
    let report = String::from_utf8_lossy(&o.stdout).to_string();
    assert_eq!(report, fs::read_to_string(out.join("validation_report.txt")).unwrap());
    assert_eq!(report.matches("[PASS] step response").count(), 2);
    assert!(report.contains("[PASS] voltage_ms_vs_line_network"));
    assert!(report.contains("[PASS] mean_power_flow"));
    // The lumped two-resistor levels ignore the cable capacitance.
    assert!(report.contains("[FAIL] voltage_ms_vs_4kTRpB"));
    assert_eq!(o.status.code(), Some(1));
}
