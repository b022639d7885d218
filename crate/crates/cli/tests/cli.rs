use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn jsrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jsrlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn word_queries() {
    let o = jsrlab(&["word", "balanced", "0011"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "false");
    assert_eq!(stdout(&jsrlab(&["word", "power-balanced", "00101"])).trim(), "true");
    assert_eq!(stdout(&jsrlab(&["word", "fibonacci", "5"])).trim(), "01001");
    let x = stdout(&jsrlab(&["word", "enumerate-x", "2", "5"]));
    assert_eq!(x.lines().count(), 5);
}

#[test]
fn tau_prefix() {
    let o = jsrlab(&["tau", "7"]);
    assert!(o.status.success());
    let got: Vec<String> = stdout(&o).split_whitespace().map(String::from).collect();
    assert_eq!(got, ["1", "2", "2", "3", "4", "10", "37", "366"]);
}

#[test]
fn alphastar_json() {
    let o = jsrlab(&["alphastar", "--digits", "20", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["digits"], "0.74932654633036755794");
    assert_eq!(v["requested"], 20);
    assert!(v["error_exponent"].as_i64().unwrap() <= -22);
    assert!(v["value"]["factors"].as_array().is_some_and(|f| f.len() == 2));
}

#[test]
fn s_curve_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = jsrlab(&["s-curve", "--q", "5", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma_num,gamma_den,s_mid,s_rad"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows[0].starts_with("0,1,"));
    assert!(rows[10].starts_with("1,1,"));
}

#[test]
fn r_curve_csv() {
    let o = jsrlab(&["r-curve", "--grid", "0.81:0.99:3", "--q", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("alpha_num,alpha_den,r_num,r_den,bracket_lo,bracket_hi")
    );
    for row in lines {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!((f[2], f[3]), ("1", "2"), "{row}");
    }
}

#[test]
fn jsr_bounds_csv() {
    let o = jsrlab(&["jsr-bounds", "--alpha", "1", "--n-max", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,lower_mid,lower_rad,upper_mid,upper_rad,witness")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("2,0.4812118250"));
    assert!(rows[1].ends_with(",01"));
}

#[test]
fn verify_words_passes() {
    let o = jsrlab(&["verify", "words"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn exit_codes() {
    assert_eq!(jsrlab(&["word", "balanced", "0021"]).status.code(), Some(2));
    assert_eq!(jsrlab(&["--precision", "8", "tau", "3"]).status.code(), Some(2));
    assert_eq!(jsrlab(&["s-eval", "2", "4"]).status.code(), Some(2));
    assert_eq!(jsrlab(&["no-such-command"]).status.code(), Some(2));
    let o = jsrlab(&["--max-precision", "128", "alphastar", "--digits", "60"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision"));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_jsrlab"))
        .env("JSRLAB_PRECISION", "8")
        .args(["tau", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
