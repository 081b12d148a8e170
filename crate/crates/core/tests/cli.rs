use std::process::{Command, Output};

use serde_json::Value;

fn vacpol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vacpol"))
        .args(args)
        .env_remove("VACPOL_TOL")
        .output()
        .expect("run vacpol")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

const SMALL: [&str; 6] = ["--r-min", "1e-4", "--r-max", "1e-2", "--points", "5"];

#[test]
fn point_csv_is_deterministic() {
    let args: Vec<&str> = ["point", "--Z", "26"].iter().chain(&SMALL).copied().collect();
    let a = vacpol(&args);
    let b = vacpol(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r_au,coulomb,delta_v,method,est_error"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn every_subcommand_runs() {
    for cmd in ["point", "fermi", "ks", "table"] {
        let args: Vec<&str> = [cmd].iter().chain(&SMALL).copied().collect();
        let out = vacpol(&args);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn usage_errors_exit_2() {
    let bad_order = vacpol(&["point", "--r-min", "1", "--r-max", "0.5"]);
    assert_eq!(bad_order.status.code(), Some(2));
    let wrong_family = vacpol(&["point", "--method", "direct"]);
    assert_eq!(wrong_family.status.code(), Some(2));
    let unknown_flag = vacpol(&["point", "--frobnicate"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
    let bad_method = vacpol(&["point", "--method", "nope"]);
    assert_eq!(bad_method.status.code(), Some(2));
    let negative_z = vacpol(&["point", "--Z", "-3"]);
    assert_eq!(negative_z.status.code(), Some(2));
    assert!(!negative_z.stderr.is_empty());
}

#[test]
fn failing_verification_exits_1() {
    let out = vacpol(&["verify", "uehling", "--flip-g-sign"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn passing_suite_exits_0() {
    let out = vacpol(&["verify", "specfun"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn config_file_then_env_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# nucleus\nZ = 50\ntol = 1e-8\npoints = 3\nformat = json\n").unwrap();
    let p = path.to_str().unwrap();

    let from_file = json(&vacpol(&["point", "--config", p]));
    assert_eq!(from_file["parameters"]["z"], 50.0);
    assert_eq!(from_file["parameters"]["tol"], 1e-8);
    assert_eq!(from_file["rows"].as_array().unwrap().len(), 3);

    let with_env = Command::new(env!("CARGO_BIN_EXE_vacpol"))
        .args(["point", "--config", p])
        .env("VACPOL_TOL", "1e-9")
        .output()
        .unwrap();
    assert_eq!(json(&with_env)["parameters"]["tol"], 1e-9);

    let with_flag = Command::new(env!("CARGO_BIN_EXE_vacpol"))
        .args(["point", "--config", p, "--tol", "1e-11", "--Z", "8"])
        .env("VACPOL_TOL", "1e-9")
        .output()
        .unwrap();
    let v = json(&with_flag);
    assert_eq!(v["parameters"]["tol"], 1e-11);
    assert_eq!(v["parameters"]["z"], 8.0);
}

#[test]
fn bad_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "colour = blue\n").unwrap();
    let out = vacpol(&["point", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let args: Vec<&str> = ["fermi", "--out", path.to_str().unwrap()].iter().chain(&SMALL).copied().collect();
    let out = vacpol(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(3) == Some("direct")));
}

#[test]
fn json_table_matches_csv() {
    let base: Vec<&str> = ["ks"].iter().chain(&SMALL).copied().collect();
    let csv = String::from_utf8(vacpol(&base).stdout).unwrap();
    let mut with_json = base.clone();
    with_json.extend(["--format", "json"]);
    let v = json(&vacpol(&with_json));
    assert_eq!(v["parameters"]["potential"], "ks");
    for (row, line) in v["rows"].as_array().unwrap().iter().zip(csv.lines().skip(1)) {
        let delta: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(row["delta_v"].as_f64().unwrap(), delta);
    }
}
