use std::process::{Command, Output};

use etaform::exact_arith::ratio;
use etaform::Formula;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etaform")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn expand_theta_quotient() {
    let out = run(&["expand", "--level", "4", "--eta", "2:5,1:-2,4:-2", "--terms", "10"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "leading_exponent: 0\nprecision: 10\ncoefficients: 1,2,0,0,2,0,0,0,0,2\n"
    );
}

#[test]
fn expand_discriminant_reciprocal() {
    let out = run(&["expand", "--level", "1", "--eta", "1:-24", "--terms", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "leading_exponent: -1\nprecision: 3\ncoefficients: 1,24,324,3200\n");
}

#[test]
fn expand_empty_quotient_is_one() {
    let out = run(&["expand", "--level", "12", "--eta", "", "--terms", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "leading_exponent: 0\nprecision: 3\ncoefficients: 1,0,0\n");
}

#[test]
fn expand_json() {
    let out = run(&["expand", "--level", "4", "--eta", "1:-2,2:5,4:-2", "--terms", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "2", "0", "0", "2"]));
    assert_eq!(v["leading_exponent"], 0);
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        vec!["expand", "--level", "1", "--eta", "1:1"],
        vec!["expand", "--level", "4", "--eta", "3:1"],
        vec!["expand", "--level", "4", "--eta", "1:1,1:2"],
        vec!["expand", "--level", "4", "--eta", "1:+1"],
        vec!["expand", "--level", "4", "--eta", "1:1,"],
        vec!["check", "--level", "4", "--eta", "x"],
        vec!["formula", "--k", "1", "--i", "0"],
        vec!["formula", "--k", "2", "--i", "5"],
        vec!["formula", "--k", "2", "--i", "-1"],
        vec!["formula", "--k", "3", "--i", "1", "--terms", "3"],
        vec!["verify", "--kmax", "1"],
        vec!["verify", "--kmax", "3", "--nmax", "2"],
        vec!["basis", "--k", "1"],
        vec!["basis", "--k", "2", "--csv", "--json"],
        vec!["nonsense"],
    ] {
        assert_eq!(code(&args), 2, "{args:?}");
    }
}

#[test]
fn check_reports_cusp_form() {
    let out = run(&["check", "--level", "12", "--eta", "1:6,3:-2,6:4"]);
    let text = stdout(&out);
    assert!(out.status.success());
    assert!(text.contains("weight: 4"), "{text}");
    assert!(text.contains("modular: yes, cusp form: yes"), "{text}");
}

#[test]
fn check_theta_is_half_integral() {
    let out = run(&["check", "--level", "4", "--eta", "1:-2,2:5,4:-2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["weight"], "1/2");
    assert_eq!(v["L4"], false);
    assert_eq!(v["L5"], false);
    assert_eq!(v["modular"], false);
    assert_eq!(v["cusp_orders"]["1/2"], "1/4");
}

#[test]
fn formula_json_round_trips() {
    let out = run(&["formula", "--k", "2", "--i", "1", "--json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let f = Formula::from_json(text.trim()).unwrap();
    assert_eq!(f.alpha, ratio(1, 5));
    assert_eq!(f.b(12), Some(&ratio(1728, 5)));
    assert_eq!(f.to_json(), text.trim());
}

#[test]
fn formula_terms_override_gives_same_result() {
    let a = stdout(&run(&["formula", "--k", "3", "--i", "2", "--json"]));
    let b = stdout(&run(&["formula", "--k", "3", "--i", "2", "--terms", "30", "--json"]));
    assert_eq!(a, b);
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--kmax", "3", "--nmax", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.ends_with("verified: 12 cells, 1224 exact comparisons, n <= 100\n"), "{text}");
}

#[test]
fn verify_fault_is_reported() {
    let out = run(&["verify", "--kmax", "2", "--nmax", "3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAILED: first mismatch at k=2 i=0 n=1"), "{text}");
}

#[test]
fn basis_csv_shape() {
    let out = run(&["basis", "--k", "3", "--terms", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,index,q^0,q^1,q^2,q^3,q^4,q^5,q^6,q^7");
    assert_eq!(lines.iter().filter(|l| l.starts_with("cusp,")).count(), 7);
    assert_eq!(lines.iter().filter(|l| l.starts_with("eisenstein,")).count(), 6);
    assert!(lines.iter().all(|l| l.split(',').count() == 10));
    assert_eq!(lines[1], "cusp,1,0,1,-18,141,-612,1494,-1458,-2392");
}

#[test]
fn basis_json() {
    let out = run(&["basis", "--k", "2", "--terms", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cusp"].as_array().unwrap().len(), 3);
    assert_eq!(v["eisenstein"][0]["coefficients"], serde_json::json!(["1/240", "1", "9"]));
}
