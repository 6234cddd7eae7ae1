use std::f64::consts::PI;
use std::fs;
use std::process::Command;

use serde_json::Value;

const SWEEP_HEADER: &str = "param,gamma_g,gamma_z_raw,gamma_z_periodic,min_gap,min_overlap,M,status";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pzphase(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pzphase"))
        .args(args)
        .output()
        .expect("spawn pzphase");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let run = pzphase(&full);
    let value = serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout));
    (run.code, value)
}

fn angle_gap(x: f64, target: f64) -> f64 {
    let d = (x - target).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[test]
fn ssh_phase_record() {
    let (code, rec) = json(&["phase", "--model", "ssh", "--v", "1", "--w", "2", "--b", "0.3"]);
    assert_eq!(code, 0);
    assert!(angle_gap(rec["gamma_g"].as_f64().unwrap(), PI) < 1e-6);
    assert_eq!(rec["M"], 4096);
    for key in [
        "gamma_z_raw",
        "gamma_z_periodic",
        "min_gap",
        "min_overlap",
        "pi_units",
        "flags",
        "status",
    ] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn gapless_ssh_exits_2() {
    let run = pzphase(&["phase", "--model", "ssh", "--v", "1", "--w", "1", "--b", "0.3"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.is_empty());
    assert!(run.stderr.contains("GapClosure"));
    let (code, err) = json(&["phase", "--v", "1", "--w", "1"]);
    assert_eq!(code, 2);
    assert_eq!(err["error"], "GapClosure");
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn kitaev_trivial_phase() {
    let (code, rec) = json(&["phase", "--model", "kitaev", "--eps", "3", "--J", "1", "--Delta", "1"]);
    assert_eq!(code, 0);
    assert!(angle_gap(rec["gamma_g"].as_f64().unwrap(), 0.0) < 1e-6);
}

#[test]
fn kitaev_sweep_phase_diagram() {
    let run = pzphase(&[
        "sweep", "--model", "kitaev", "--param", "eps", "--from", "0", "--to", "4", "--steps", "81",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 82);
    for (i, line) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let eps: f64 = cells[0].parse().unwrap();
        assert!((eps - 0.05 * i as f64).abs() < 1e-9, "rows out of grid order");
        if i == 40 {
            assert_eq!(cells[7], "GAP_CLOSURE");
            assert!(cells[1].is_empty() && cells[2].is_empty() && cells[3].is_empty());
            continue;
        }
        let gamma: f64 = cells[1].parse().unwrap();
        let expected = if eps < 2.0 { PI } else { 0.0 };
        assert!(angle_gap(gamma, expected) < 1e-6, "eps {eps}: {gamma}");
        assert_eq!(cells[7], "OK");
    }
}

#[test]
fn ssh_sweep_steps_at_v_equal_w() {
    let (code, rows) = json(&[
        "sweep", "--w", "1", "--b", "0.3", "--param", "v", "--from", "0.2", "--to", "5", "--steps", "25",
    ]);
    assert_eq!(code, 0);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 25);
    for row in rows {
        let v = row["param"].as_f64().unwrap();
        if (v - 1.0).abs() < 1e-9 {
            assert_eq!(row["status"], "GAP_CLOSURE");
            continue;
        }
        let expected = if v < 1.0 { PI } else { 0.0 };
        assert!(angle_gap(row["gamma_g"].as_f64().unwrap(), expected) < 1e-6, "v = {v}");
    }
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.join(","), SWEEP_HEADER);
}

#[test]
fn two_step_sweep_in_constant_region() {
    let run = pzphase(&["sweep", "--param", "v", "--from", "0.2", "--to", "0.4", "--steps", "2"]);
    assert_eq!(run.code, 0);
    let gammas: Vec<&str> = run
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(gammas.len(), 2);
    assert_eq!(gammas[0], gammas[1]);
}

#[test]
fn bad_sweeps_exit_3() {
    for args in [
        vec!["sweep", "--param", "v", "--from", "1", "--to", "0", "--steps", "5"],
        vec!["sweep", "--param", "v", "--from", "0", "--to", "1", "--steps", "1"],
        vec!["sweep", "--param", "colour", "--from", "0", "--to", "1", "--steps", "5"],
        vec!["sweep", "--param", "eps", "--from", "0", "--to", "1", "--steps", "5"],
        vec!["sweep", "--param", "v", "--from", "0", "--to", "1"],
    ] {
        let run = pzphase(&args);
        assert_eq!(run.code, 3, "{args:?}");
        assert!(run.stdout.is_empty());
    }
}

#[test]
fn gauge_fuzz_harness() {
    let (code, rec) = json(&["gauge-fuzz", "--trials", "100"]);
    assert_eq!(code, 0);
    assert!(rec["max_delta_gamma_g"].as_f64().unwrap() < 1e-9);
    assert!(rec["max_zak_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(pzphase(&["gauge-fuzz", "--trials", "0"]).code, 3);
}

#[test]
fn translate_test_harness() {
    let (code, rows) = json(&["translate-test", "--d", "0,1,0.37"]);
    assert_eq!(code, 0);
    let rows = rows.as_array().unwrap();
    for row in &rows[..2] {
        assert!(row["delta_gamma_g"].as_f64().unwrap() < 1e-12);
        assert!(angle_gap(row["delta_gamma_z"].as_f64().unwrap(), 0.0) < 1e-9);
    }
    assert!(angle_gap(rows[2]["delta_gamma_z"].as_f64().unwrap(), 2.0 * PI * 0.37) < 1e-6);

    let (code, rows) = json(&["translate-test"]);
    assert_eq!(code, 0);
    assert_eq!(rows.as_array().unwrap().len(), 20);

    assert_eq!(pzphase(&["translate-test", "--model", "kitaev"]).code, 3);
    assert_eq!(
        pzphase(&[
            "translate-test",
            "--model",
            "continuum",
            "--nmax",
            "4",
            "--M",
            "256",
            "--count",
            "3"
        ])
        .code,
        0
    );
}

#[test]
fn manybody_statistics() {
    let (_, one) = json(&["manybody", "--N", "1"]);
    assert_eq!(one["formula"], one["gamma_g"]);
    let (code, two) = json(&["manybody", "--N", "2", "--v", "1", "--w", "2"]);
    assert_eq!(code, 0);
    assert!(angle_gap(two["formula"].as_f64().unwrap(), 0.0) < 1e-9);
    let (code, five) = json(&["manybody", "--N", "5"]);
    assert_eq!(code, 0);
    assert!(five["difference"].as_f64().unwrap() < 1e-6);
    assert_eq!(pzphase(&["manybody", "--N", "0"]).code, 3);
}

#[test]
fn adiabatic_cross_check() {
    let (code, rows) = json(&["adiabatic", "--v", "1", "--w", "2"]);
    assert_eq!(code, 0);
    let devs: Vec<f64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["deviation"].as_f64().unwrap())
        .collect();
    assert_eq!(devs.len(), 3);
    assert!(devs[0] >= devs[1] && devs[1] >= devs[2] && devs[2] < 0.05);
    // far too fast to be adiabatic
    assert_eq!(pzphase(&["adiabatic", "--T", "1,2"]).code, 1);
}

#[test]
fn obc_zero_modes() {
    let count = |v: &str| {
        json(&["obc", "--v", v, "--w", "1", "--cells", "40"]).1["zero_modes"]
            .as_i64()
            .unwrap()
    };
    assert_eq!(count("0.5"), 2);
    assert_eq!(count("2"), 0);
    assert_eq!(count("0"), 2);
    assert_eq!(pzphase(&["obc", "--model", "kitaev"]).code, 3);
}

#[test]
fn continuum_alias_matches_phase() {
    let a = pzphase(&["continuum", "--v0", "2", "--nmax", "6", "--M", "256"]);
    let b = pzphase(&[
        "phase",
        "--model",
        "continuum",
        "--v0",
        "2",
        "--nmax",
        "6",
        "--M",
        "256",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_is_deterministic_across_workers() {
    let args = [
        "sweep", "--param", "v", "--from", "0.2", "--to", "3", "--steps", "15", "--M", "512",
    ];
    let one = pzphase(&[&args[..], &["--workers", "1"]].concat());
    let four = pzphase(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(
        pzphase(&["gauge-fuzz", "--seed", "7"]).stdout,
        pzphase(&["gauge-fuzz", "--seed", "7"]).stdout
    );
}

#[test]
fn out_file_is_written_whole_or_not_at_all() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phase.csv");
    let run = pzphase(&["phase", "--out", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    assert!(fs::read_to_string(&path).unwrap().starts_with("model,band,gamma_g"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);

    let failed = dir.path().join("gap.csv");
    assert_eq!(
        pzphase(&["phase", "--v", "1", "--w", "1", "--out", failed.to_str().unwrap()]).code,
        2
    );
    assert!(!failed.exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(
        &path,
        "# Kitaev defaults\nmodel = kitaev\neps = 3   # trivial\nJ = 1\nDelta = 1\nformat = json\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let run = pzphase(&["phase", "--config", cfg]);
    let rec: Value = serde_json::from_str(&run.stdout).unwrap();
    assert!(angle_gap(rec["gamma_g"].as_f64().unwrap(), 0.0) < 1e-6);
    let run = pzphase(&["phase", "--config", cfg, "--eps", "1"]);
    let rec: Value = serde_json::from_str(&run.stdout).unwrap();
    assert!(angle_gap(rec["gamma_g"].as_f64().unwrap(), PI) < 1e-6);

    fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(pzphase(&["phase", "--config", cfg]).code, 3);
}

#[test]
fn flag_errors_and_help() {
    assert_eq!(pzphase(&["phase", "--bogus"]).code, 3);
    assert_eq!(pzphase(&["phase", "--v", "abc"]).code, 3);
    assert_eq!(pzphase(&["phase", "--model", "graphene"]).code, 3);
    assert_eq!(pzphase(&["phase", "--b", "1.5"]).code, 3);
    assert_eq!(pzphase(&["--help"]).code, 0);
    let (code, err) = json(&["phase", "--bogus"]);
    assert_eq!(code, 3);
    assert_eq!(err["error"], "InvalidInput");
}

#[test]
fn boundary_case_reports_no_phase() {
    let (code, rec) = json(&["phase", "--b", "0.5"]);
    assert_eq!(code, 0);
    assert!(rec["gamma_g"].is_null());
    assert_eq!(rec["status"], "BOUNDARY");
}
