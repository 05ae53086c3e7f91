use std::process::{Command, Output};

use serde_json::Value;

fn ym2d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ym2d")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = ym2d(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn values(r: &Value, engine: &str, quantity: &str) -> Vec<f64> {
    r["measurements"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|m| m["engine"] == engine && m["quantity"] == quantity)
        .map(|m| m["value"].as_f64().unwrap())
        .collect()
}

#[test]
fn u1_cutoff_zero_lists_only_the_trivial_irrep() {
    let r = report(&["irreps", "--group", "U1", "--cutoff", "0"]);
    assert_eq!(r["schema"], "ym2d/1");
    assert_eq!(r["details"]["count"], 1);
    assert_eq!(r["details"]["irreps"][0]["label"], 0);
}

#[test]
fn su2_irreps_are_sorted_by_casimir() {
    let r = report(&["irreps", "--cutoff", "4"]);
    let c = values(&r, "liegroup", "casimir");
    assert_eq!(c, vec![0.0, 1.5, 4.0]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["wilson", "mc", "--irrep", "2", "--lambda0", "1", "--samples", "10000", "--seed", "9"];
    let first = ym2d(&args);
    assert!(first.status.success() && !first.stdout.is_empty());
    assert_eq!(first.stdout, ym2d(&args).stdout);
    let other = ["wilson", "mc", "--irrep", "2", "--lambda0", "1", "--samples", "10000", "--seed", "10"];
    assert_ne!(ym2d(&args).stdout, ym2d(&other).stdout);
}

#[test]
fn exact_engines_agree_and_gap_is_tiny_at_small_coupling() {
    let r = report(&["wilson", "exact", "--irrep", "2", "--lambda", "0.5", "--areas", "0.3,0.7"]);
    assert_eq!(r["passed"], true);
    let quad = values(&r, "lattice/quadrature", "wilson")[0];
    let gauss = values(&r, "asymptotics/gaussian", "wilson")[0];
    assert!((quad - gauss).abs() < 1e-12);
}

#[test]
fn compare_limits_first_differs_at_second_order() {
    let r = report(&["compare-limits", "--m", "2", "--order", "3"]);
    assert_eq!(r["details"]["first_difference"], 2);
    let b: Vec<&str> = r["details"]["series_b"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["rational"].as_str().unwrap())
        .collect();
    assert_eq!(b, ["2", "-3/2", "5/16", "-7/192"]);
}

#[test]
fn asymptotic_series_coefficients_are_exact() {
    let r = report(&["wilson", "asymptotic", "--group", "U1", "--irrep", "2", "--rho", "0.1", "--order", "3"]);
    // e^{-2 rho}: 1, -2, 2, -4/3
    let exact: Vec<&str> = r["details"]["series"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["rational"].as_str().unwrap())
        .collect();
    assert_eq!(exact, ["1", "-2", "2", "-4/3"]);
    let v = values(&r, "asymptotics/gaussian", "wilson")[0];
    assert!((v - (-0.2f64).exp()).abs() < 1e-12);
}

#[test]
fn monte_carlo_agrees_with_exact_within_three_sigma() {
    let r = report(&["wilson", "mc", "--irrep", "3", "--lambda0", "1.5", "--areas", "1/3,2/3", "--samples", "20000"]);
    assert_eq!(r["passed"], true);
    assert!(r["comparisons"].as_array().unwrap().iter().all(|c| c["asserted"] == true));
}

#[test]
fn large_coupling_gap_is_reported_but_not_asserted() {
    let r = report(&["instanton-gap", "--lambda", "5"]);
    assert_eq!(r["passed"], true);
    assert!(r["comparisons"].as_array().unwrap().iter().all(|c| c["asserted"] == false));
    assert!(r["details"]["point"]["gap"].as_f64().unwrap().abs() > 1e-2);
}

#[test]
fn perturbative_coefficients_match_the_series() {
    let r = report(&["wilson", "pert", "--irrep", "2", "--order", "2", "--budget", "20000"]);
    assert_eq!(r["passed"], true);
    let pert = values(&r, "pertloop", "coefficient_rho");
    assert!((pert[2] - 5.0 / 16.0).abs() < 1e-6, "{pert:?}");
}

#[test]
fn wick_demo_exact_rational() {
    // <x^4> = 3 p^2 with p = 2/3
    let spec = r#"{"generators":[{"id":0,"degree":0}],"monomial":[0,0,0,0],
                   "pairing":[{"a":0,"b":0,"value":"2/3"}],"exact":true}"#;
    let r = report(&["wick-demo", "--json", spec]);
    assert_eq!(r["measurements"][0]["exact"], "4/3");
    assert_eq!(r["passed"], true);
}

#[test]
fn invalid_input_exits_with_status_two() {
    for args in [
        vec!["irreps", "--group", "SO3", "--cutoff", "1"],
        vec!["wilson", "exact", "--irrep", "0", "--lambda", "1"],
        vec!["wilson", "exact", "--irrep", "2", "--lambda", "-1"],
        vec!["wilson", "pert", "--irrep", "2", "--order", "4"],
        vec!["heat-kernel", "--t", "1", "--truncation", "bogus"],
    ] {
        let out = ym2d(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn csv_has_one_row_per_measurement() {
    let out = ym2d(&["--format", "csv", "partition", "--genus", "0", "--lambda", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "engine,quantity,genus,lambda,value,error_estimate");
    assert_eq!(lines.len(), 3);
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join(format!("ym2d-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z.json");
    let out = ym2d(&["partition", "--lambda", "2", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "partition");
    std::fs::remove_dir_all(dir).unwrap();
}
