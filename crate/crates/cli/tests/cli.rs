//! End-to-end tests of the `logorder` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use logorder::distribution::MomentTableJson;
use logorder::padic::{q, Prime};
use logorder::projsys::{system_from_series, SystemJson};
use logorder::series::SeriesJson;
use logorder::{GrowthClass, TruncSeries, Window};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_logorder"));
    c.env_remove("PADIC_PRIME");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    assert!(
        out.status.success(),
        "{args:?} failed: {}\n{}",
        String::from_utf8_lossy(&out.stderr),
        String::from_utf8_lossy(&out.stdout)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logorder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_json<T: serde::Serialize>(name: &str, v: &T) -> String {
    let path = scratch(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn sample_system() -> SystemJson {
    let p = p3();
    let f = TruncSeries::poly1_int(p, &[1, -3, 9, 2, 0, 5, -1, 7, 4, 1, 2, 3, -2, 6]);
    let w = Window::with_default_u(p, vec![0], vec![1]).unwrap();
    let h = GrowthClass::new(vec![q(1)]).unwrap();
    SystemJson::from(&system_from_series(&f, &h, &w, 2).unwrap())
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = json_report(&["selftest", "--p", "3", "--seed", "1"]);
    let b = json_report(&["selftest", "--p", "3", "--seed", "1"]);
    assert_eq!(a["status"], "pass");
    let strip = |v: &Value| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["name"].clone(), c["status"].clone(), c["detail"].clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(a["config"]["seed"], 1);
}

#[test]
fn omega_example() {
    let r = json_report(&["omega", "--p", "3", "--window", "0,1", "--level", "2"]);
    let out = &r["output"];
    // (e − d + 1)·p^m = 18 coefficients past the constant term.
    assert_eq!(out["degree"], 18);
    let row = &out["newton_table"][1];
    assert_eq!(row["t"], "1/6");
    assert_eq!(row["degree"], 6);
    assert_eq!(row["valuation"], "3");
    assert_eq!(r["status"], "pass");
}

#[test]
fn default_prime_from_environment() {
    let out = bin()
        .env("PADIC_PRIME", "5")
        .args(["omega", "--window", "0,0", "--level", "1", "--json"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["p"], 5);
    assert_eq!(v["output"]["degree"], 5);
}

#[test]
fn malformed_input_exits_with_two() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["reconstruct", "--system", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let wrong = write_json("wrong.json", &serde_json::json!({ "p": 3, "levels": 4 }));
    assert_eq!(run(&["divide", "--g", &wrong, "--f", &wrong]).status.code(), Some(2));
    assert_eq!(run(&["selftest", "--p", "4"]).status.code(), Some(2));
    let missing = run(&["newton", "--f", "/nonexistent/x.json", "--tmin", "0", "--tmax", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn divide_prepare_newton() {
    let p = p3();
    let f = write_json("f.json", &SeriesJson::from(&TruncSeries::poly1_int(p, &[3, 9, 1, 2])));
    let g = write_json("g.json", &SeriesJson::from(&TruncSeries::poly1_int(p, &[1, 1, 1, 1, 1, 1])));
    let r = json_report(&["divide", "--g", &g, "--f", &f]);
    assert_eq!(r["output"]["leading_index"], 2);
    assert_eq!(r["output"]["certified"], true);
    let rem: SeriesJson = serde_json::from_value(r["output"]["remainder"].clone()).unwrap();
    let rem = TruncSeries::try_from(&rem).unwrap();
    assert!(rem.degree_in(0).map_or(true, |d| d < 2));

    let r = json_report(&["prepare", "--f", &f]);
    assert_eq!(r["output"]["degree"], 2);

    let r = json_report(&["newton", "--f", &f, "--tmin", "0", "--tmax", "2"]);
    assert!(!r["output"]["break_points"].as_array().unwrap().is_empty());
}

#[test]
fn system_pipeline() {
    let sys = write_json("system.json", &sample_system());
    let r = json_report(&["reconstruct", "--system", &sys]);
    assert_eq!(r["status"], "pass");
    let r = json_report(&["lift", "--system", &sys]);
    assert_eq!(r["status"], "pass");

    let out = scratch("moments.json");
    let r = json_report(&["moments", "--system", &sys, "--out", out.to_str().unwrap()]);
    assert_eq!(r["status"], "pass");
    let table: MomentTableJson = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(table.level, 2);
    let m = out.to_str().unwrap();
    let r = json_report(&["interp", "--moments", m]);
    // Weights 0 and 1 times the 9 characters of Z/9.
    assert_eq!(r["output"]["values"].as_array().unwrap().len(), 18);
    let r = json_report(&["convolve", "--a", m, "--b", m]);
    assert_eq!(r["output"]["growth"][0], "2");
}

#[test]
fn vanish_on_window_polynomial() {
    let p = p3();
    let om = logorder::growth::omega_one(p, &q(4), 0, 1, 1);
    let f = write_json("omega.json", &SeriesJson::from(&TruncSeries::poly1(p, om.coeffs())));
    let r = json_report(&["vanish", "--f", &f, "--h", "1", "--d", "0", "--top", "2"]);
    assert_eq!(r["output"]["levels"], serde_json::json!([true, true, false]));
}

#[test]
fn eisenstein_qexp_schema() {
    let r = json_report(&["eisenstein", "qexp", "--kind", "f", "--k", "2", "--trunc", "6"]);
    let out = &r["output"];
    assert_eq!(out["Q"], 6);
    // σ_1(6) = 12.
    let c6 = out["coeffs"].as_array().unwrap().iter().find(|c| c["n"] == 6).unwrap();
    assert_eq!(c6["poly"][0]["coords"][0], "12");
    let r = json_report(&["eisenstein", "characters", "--modulus", "9"]);
    assert_eq!(r["output"]["characters"].as_array().unwrap().len(), 6);
    let odd = run(&["eisenstein", "qexp", "--kind", "f", "--k", "2", "--psi2", "3:1"]);
    assert_eq!(odd.status.code(), Some(1));
}

#[test]
fn verify_subcommands() {
    let r = json_report(&["verify", "tilde-f", "--k", "3", "--level", "3", "--trunc", "8"]);
    assert_eq!(r["status"], "pass");
    assert!(r["checks"].as_array().unwrap().len() > 5);
    let r = json_report(&["verify", "interpolation", "--weights", "1,2", "--trunc", "6", "--refine", "--m2", "0"]);
    assert_eq!(r["status"], "pass");
}

#[test]
fn constants_table() {
    let r = json_report(&["constants", "--p", "3", "--h", "0,1", "--window", "0,2"]);
    let rows = r["output"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["alpha"], 0);
    assert_eq!(rows[0]["beta"], 0);
    assert_eq!(rows[0]["c"], 6);
    assert_eq!(rows[1]["beta"], -2);
}
