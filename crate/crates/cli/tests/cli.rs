use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn weyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl")).args(args).output().expect("binary runs")
}

fn weyl_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl"))
        .args(args)
        .env("WEYL_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    for r in &rows {
        assert_eq!(r.len(), header.len());
    }
    (header, rows)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn coeffs_three_dimensional_boundary_constant() {
    let out = stdout(&weyl(&["coeffs", "--lambda", "0", "--mu", "1", "--dim", "3"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let b_df = v["b_df"].as_f64().unwrap();
    assert!((b_df + 1.0 / (32.0 * PI)).abs() < 1e-15);
    assert_eq!(v["df"]["b"].as_f64().unwrap(), b_df);
    assert_eq!(v["fd"]["b"].as_f64().unwrap(), -b_df);
}

#[test]
fn coeffs_csv_lists_both_conditions() {
    let out = stdout(&weyl(&["coeffs", "--dim", "2", "--format", "csv", "--boundary-volume", "2"]));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["bc", "a", "b", "leading", "second", "heat_second"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "df");
    let b: f64 = rows[0][2].parse().unwrap();
    let second: f64 = rows[0][4].parse().unwrap();
    assert!((second - 2.0 * b).abs() < 1e-15);
}

#[test]
fn cylinder2d_worked_value() {
    let args = ["cylinder2d", "--lambda", "0", "--mu", "1", "--h", "3.14159265358979", "--lambda-max", "5.5", "--samples", "1"];
    for (bc, want) in [("df", "15"), ("fd", "13")] {
        let mut a = args.to_vec();
        a.extend(["--bc", bc]);
        let (header, rows) = csv_rows(&stdout(&weyl(&a)));
        assert_eq!(header, ["lambda", "n_exact", "n_closed", "pred_two_term", "residual1"]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0][0].parse::<f64>().unwrap(), 5.5);
        assert_eq!((rows[0][1].as_str(), rows[0][2].as_str()), (want, want));
    }
}

#[test]
fn cylinder3d_worked_values() {
    for (bc, want) in [("df", "33"), ("fd", "41")] {
        let out = stdout(&weyl(&["cylinder3d", "--lambda-max", "4.5", "--samples", "1", "--bc", bc]));
        let (_, rows) = csv_rows(&out);
        assert_eq!((rows[0][1].as_str(), rows[0][2].as_str()), (want, want));
    }
}

#[test]
fn cylinder_sidecar_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let p = path.to_str().unwrap();
    stdout(&weyl(&["cylinder2d", "--lambda-max", "1e5", "--samples", "2000", "--out", p]));
    let (_, rows) = csv_rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 2000);
    let lambdas: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(lambdas.windows(2).all(|w| w[0] < w[1]));
    assert!(rows.iter().all(|r| r[1] == r[2]));
    let meta = read_json(&dir.path().join("c.csv.meta.json"));
    let smallest = meta["smallest_eigenvalue"].as_f64().unwrap();
    assert!((lambdas[0] - 1.1 * smallest).abs() < 1e-9 * smallest);
    assert!((meta["C_second"].as_f64().unwrap() - (1.0 - 0.5f64.sqrt())).abs() < 1e-14);
    assert_eq!(meta["mismatches"], 0);
    let est = meta["estimate"]["value"].as_f64().unwrap();
    assert!(est > 0.0 && (est - 0.2929).abs() < 0.05 * 0.2929, "{est}");
}

#[test]
fn json_format_embeds_meta() {
    let out = stdout(&weyl(&["cylinder2d", "--lambda-max", "100", "--samples", "5", "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert!(v["rows"][0]["n_exact"].is_u64());
    assert!(v["meta"]["C_leading"].is_f64());
    // Too few samples for windowed averaging.
    assert!(v["meta"]["estimate"].is_null());
    assert!(v["meta"]["estimate_error"].is_string());
}

#[test]
fn disk_writes_roots_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let p = path.to_str().unwrap();
    stdout(&weyl(&["disk", "--bc", "fd", "--lambda-max", "300", "--samples", "100", "--out", p]));
    let (header, rows) = csv_rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["lambda", "n", "pred_two_term", "residual1"]);
    assert_eq!(rows.len(), 100);
    let (rh, roots) = csv_rows(&fs::read_to_string(dir.path().join("d.csv.roots.csv")).unwrap());
    assert_eq!(rh, ["k", "root", "multiplicity"]);
    let meta = read_json(&dir.path().join("d.csv.meta.json"));
    assert_eq!(meta["zero_modes"], 1);
    // N at lambda-max counts every root plus the rigid rotation.
    let total: u64 = roots
        .iter()
        .filter(|r| r[1].parse::<f64>().unwrap() < 300.0)
        .map(|r| r[2].parse::<u64>().unwrap())
        .sum();
    assert_eq!(rows.last().unwrap()[1].parse::<u64>().unwrap(), total + 1);
    for r in &roots {
        let want = if r[0] == "0" { "1" } else { "2" };
        assert_eq!(r[2], want);
    }
}

#[test]
fn shift_profile_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    stdout(&weyl(&["shift", "--dim", "3", "--bc", "fd", "--samples", "60", "--out", p]));
    let (header, rows) = csv_rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["xi_zone", "lambda", "shift_value", "det_s_re", "det_s_im"]);
    for r in &rows {
        let shift: f64 = r[2].parse().unwrap();
        let want = match r[0].as_str() {
            "below" => 0.0,
            "I1" => 0.0,
            "I2" => 0.25,
            z => panic!("zone {z}"),
        };
        assert_eq!(shift, want, "{r:?}");
        if r[0] == "below" {
            assert_eq!(r[3], "NaN");
        } else {
            let (re, im): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
            assert!((re.hypot(im) - 1.0).abs() < 1e-12);
        }
    }
    let meta = read_json(&dir.path().join("s.csv.meta.json"));
    let c = &meta["heat_second"];
    let closed = c["closed_form"].as_f64().unwrap();
    assert!((c["exact"].as_f64().unwrap() - closed).abs() < 1e-12);
    assert!(meta["scattering_audit"]["max_unitarity_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_passes_on_defaults() {
    let out = stdout(&weyl(&["verify"]));
    assert!(out.lines().filter(|l| l.starts_with("[PASS]")).count() >= 9);
    assert!(!out.contains("[FAIL]"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["cylinder3d", "--lambda-max", "500", "--samples", "150", "--bc", "fd"],
        vec!["disk", "--lambda-max", "400", "--samples", "150"],
        vec!["shift", "--dim", "4", "--samples", "40"],
    ] {
        let mut files = Vec::new();
        for (i, threads) in ["1", "4"].into_iter().enumerate() {
            let path = dir.path().join(format!("{}-{i}.csv", cmd[0]));
            let mut args = cmd.clone();
            let p = path.to_str().unwrap().to_string();
            args.extend(["--out", &p]);
            stdout(&weyl_env(&args, threads));
            files.push((fs::read(&path).unwrap(), fs::read(format!("{p}.meta.json")).unwrap()));
        }
        assert!(files[0] == files[1], "{} output differs between runs", cmd[0]);
    }
}

#[test]
fn exit_codes() {
    let code = |o: Output| o.status.code().unwrap();
    assert_eq!(code(weyl(&["coeffs", "--lambda", "-5"])), 1);
    assert_eq!(code(weyl(&["coeffs", "--mu", "0"])), 1);
    assert_eq!(code(weyl(&["cylinder2d", "--h", "-1"])), 1);
    assert_eq!(code(weyl(&["cylinder2d", "--samples", "0"])), 1);
    assert_eq!(code(weyl(&["cylinder2d", "--lambda-max", "0.5", "--samples", "10"])), 1);
    assert_eq!(code(weyl(&["disk", "--lambda-max", "1e6"])), 1);
    assert_eq!(code(weyl(&["frobnicate"])), 1);
    assert_eq!(code(weyl(&["coeffs", "--bc", "xx"])), 1);
    assert_eq!(code(weyl(&["coeffs", "--out", "/nonexistent/dir/x.json"])), 3);
    assert_eq!(code(weyl_env(&["coeffs"], "none")), 1);
    assert_eq!(code(weyl(&["--help"])), 0);
}
