use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torgrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn schema(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "schemas", &format!("{name}.schema.json")]
        .iter()
        .collect();
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v:#}");
}

#[test]
fn analyze_reports_match_schema() {
    let v = json(&["analyze", "1,-3,1", "--radius", "8", "--r-max", "12"]);
    assert_valid("analyze", &v);
    assert_eq!(v["gordon"]["periodic"], Value::Bool(false));
    assert_eq!(v["poles"].as_array().unwrap().len(), 3);
    assert_eq!(v["torsion"][2]["value"], "16");
    let lm = v["mahler"].as_f64().unwrap();
    assert!((lm - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);

    let t = json(&["analyze", "1,-1,1", "--r-max", "12"]);
    assert_valid("analyze", &t);
    assert_eq!(t["gordon"]["period"], 6);
    assert_eq!(t["torsion"][5]["value"], "0");
}

#[test]
fn lehmer_is_a_natural_boundary() {
    let v = json(&["analyze", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--r-max", "6"]);
    assert_valid("analyze", &v);
    assert!(v["laurent"].is_null());
    assert_eq!(v["diophantine"]["roots"].as_array().unwrap().len(), 8);
    let o = run(&["eval", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--z", "0.3,0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_and_exit_codes() {
    let v = json(&["eval", "1,-3,1", "--z", "0.2,0"]);
    assert_valid("eval", &v);
    let phi2: f64 = (3.0 + 5f64.sqrt()) / 2.0;
    let series: f64 = (1..=200)
        .map(|r| 0.2f64.powi(r) * (r as f64 * phi2.ln() + 2.0 * (-phi2.powi(-r)).ln_1p()))
        .sum();
    let got = v["value"]["re"].as_f64().unwrap();
    assert!((got - series).abs() < 1e-9, "{got} vs {series}");
    let series = json(&["eval", "1,-3,1", "--z", "0.2,0", "--quantity", "e-series", "--terms", "200"]);
    assert_valid("eval", &series);
    assert!((series["value"]["re"].as_f64().unwrap() - got).abs() < 1e-9);
    assert_eq!(run(&["eval", "1,-3,1", "--z", "1,0"]).status.code(), Some(4));
    assert_eq!(run(&["eval", "1,x,1", "--z", "0.1,0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "1,-3,1"]).status.code(), Some(2));
    assert_eq!(run(&["--json", "--csv", "torsion", "1,-3,1"]).status.code(), Some(2));
    assert_eq!(run(&["lvalue", "0"]).status.code(), Some(2));
}

#[test]
fn grid_marks_poles() {
    let o = run(&[
        "grid", "1,-1,1", "--nx", "3", "--ny", "3", "--re-min", "-1", "--re-max", "1", "--im-min", "-1", "--im-max", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["re", "im", "value"]);
    let recs: Vec<csv::StringRecord> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), 9);
    let at = |re: &str, im: &str| recs.iter().find(|r| &r[0] == re && &r[1] == im).unwrap()[2].to_string();
    assert_eq!(at("1", "0"), "POLE");
    assert_eq!(at("-1", "0"), "POLE");
    assert_eq!(at("0", "0"), "0");
    let v: f64 = at("0", "1").parse().unwrap();
    let z = num_complex::Complex64::new(0.0, 1.0);
    let (l3, l4) = (3f64.ln(), 4f64.ln());
    let closed = (z.powu(2) * l3 + z.powu(3) * l4 + z.powu(4) * l3) / (1.0 - z.powu(6));
    assert!((v - closed.norm()).abs() < 1e-9, "{v} vs {closed}");
}

#[test]
fn grid_writes_to_file() {
    let path = std::env::temp_dir().join(format!("grid-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["grid", "1,-3,1", "--nx", "4", "--ny", "2", "--re-min", "-0.3", "--re-max", "0.3", "--im-min", "-0.1", "--im-max", "0.1", "--part", "re", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().count(), 1 + 8);
}

#[test]
fn torsion_table_output() {
    let o = run(&["--csv", "torsion", "1,-3,1", "--r-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "r,value\n1,1\n2,5\n3,16\n4,45\n5,121");
}

#[test]
fn cyclic_mersenne() {
    let o = run(&["cyclic", "-2,1", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "m,r_m,is_unit");
    let vals: Vec<String> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().trim_start_matches('-').to_string()).collect();
    assert_eq!(vals, vec!["1", "3", "7", "15", "31"]);
    assert!(lines[1].ends_with(",true"));
    assert!(lines[2].ends_with(",false"));

    let v = json(&["cyclic", "-3,7,-2", "--g", "6,-5,1", "--count", "8"]);
    assert_valid("cyclic", &v);
    assert_eq!(v["comparison"]["equal"], Value::Bool(true));
}

#[test]
fn units_scan() {
    let v = json(&["units", "-1,-1,1", "--bound", "10"]);
    assert_valid("units", &v);
    assert_eq!(v["e0"], 2);
    assert_eq!(v["unit_indices"], serde_json::json!([1, 2]));
    assert_eq!(v["count_is_lower_bound"], Value::Bool(true));
    assert_eq!(run(&["units", "-1,1"]).status.code(), Some(2));
}

#[test]
fn lvalues_and_averages() {
    let v = json(&["lvalue", "3"]);
    assert_valid("lvalue", &v);
    let l = v["characters"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["principal"] == Value::Bool(false))
        .unwrap()["l_one"]["re"]
        .as_f64()
        .unwrap();
    assert!((l - std::f64::consts::PI / (3.0 * 3f64.sqrt())).abs() < 1e-14);

    let a = json(&["average", "0.6180339887498949", "--m", "1", "--n", "100000"]);
    assert_valid("average", &a);
    assert!((a["average"]["re"].as_f64().unwrap() + 0.5).abs() < 1e-3);
    let b = json(&["--threads", "1", "average", "0.6180339887498949", "--m", "1", "--n", "100000"]);
    assert_eq!(a, b);
    let r = json(&["average", "root:1,1,0,-1,-1,-1,-1,-1,0,1,1:1", "--n", "1000"]);
    assert_valid("average", &r);
}

#[test]
fn radial_limits() {
    let v = json(&["radial", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--p", "0.73205080756887729", "--mode", "cesaro"]);
    assert_valid("radial", &v);
    assert_eq!(run(&["radial", "1,-3,1", "--p", "0.1", "--mode", "sideways"]).status.code(), Some(2));
}
