use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn qf2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qf2")).args(args).env_remove("QF2_ORDER").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = qf2(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn fan_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn f2_fan() {
    let v = json(&["fan", "--format", "json"]);
    assert_eq!(v["class_matrix"]["entries"], serde_json::json!([[1, 1, 2, 0], [0, 0, 1, 1]]));
    assert_eq!(v["primitive_collections"], serde_json::json!([[0, 1], [2, 3]]));
    assert_eq!(v["beta_p"][0]["q"], "q4");
    assert_eq!(v["beta_p"][1]["q"], "q2");
    assert_eq!(v["batyrev"]["reduced"], serde_json::json!(["x2^2 - q4*x4^2", "2*x2*x4 + x4^2 - q2"]));
    assert_eq!(v["fan"]["rays"], serde_json::json!([[-1, 2], [1, 0], [0, -1], [0, 1]]));
}

#[test]
fn fan_from_file() {
    let f = fan_file(r#"{"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#);
    let v = json(&["fan", "--fan", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["primitive_collections"].as_array().unwrap().len(), 1);
    assert_eq!(v["class_matrix"]["entries"], serde_json::json!([[1, 1, 1]]));
}

#[test]
fn bad_fans_are_input_errors() {
    let f = fan_file("{\"rays\": [[1,0],\n [0,1]");
    let o = qf2(&["fan", "--fan", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let f = fan_file(r#"{"rays":[[1,0],[1,2],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#);
    let o = qf2(&["fan", "--fan", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = qf2(&["fan", "--fan", "/nonexistent/fan.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invariant_values() {
    let v = json(&["invariants", "--family", "dD4", "--d-max", "3", "--format", "json"]);
    let vals: Vec<&str> = v["values"].as_array().unwrap().iter().map(|x| x["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["-1", "-3/2", "-10/3"]);
    let v = json(&["invariants", "--family", "D2+dD4", "--d-max", "2", "--method", "assembled", "--format", "json"]);
    let vals: Vec<&str> = v["values"].as_array().unwrap().iter().map(|x| x["value"].as_str().unwrap()).collect();
    // the class D2 itself gives 0, not -1/2
    assert_eq!(vals, ["0", "1", "1"]);
}

#[test]
fn methods_agree() {
    for fam in ["dD4", "D2+dD4"] {
        let a = qf2(&["invariants", "--family", fam, "--d-max", "5", "--method", "closed", "--format", "json"]);
        let b = qf2(&["invariants", "--family", fam, "--d-max", "5", "--method", "assembled", "--format", "json"]);
        assert_eq!(a.stdout, b.stdout);
        let c = qf2(&["invariants", "--family", fam, "--d-max", "5", "--method", "both"]);
        assert!(c.status.success());
    }
}

#[test]
fn per_locus_records() {
    let v = json(&["loci", "--family", "dD4", "--d-max", "2", "--format", "json"]);
    let d2 = &v["degrees"][1];
    assert_eq!(d2["d"], 2);
    let loci = d2["loci"].as_array().unwrap();
    assert_eq!(loci[0], serde_json::json!({"graph": "F_2", "value": "3/2", "method": "closed"}));
    assert_eq!(loci[1]["graph"], "F_{1,1}");
    assert_eq!(loci[2]["value"], "-4");

    let v = json(&["invariants", "--family", "D2+dD4", "--d-max", "2", "--show-loci", "--method", "both", "--format", "json"]);
    let loci = v["loci"][2]["loci"].as_array().unwrap();
    assert_eq!(loci.len(), 4);
    assert_eq!(loci[3], serde_json::json!({"graph": "F'_1", "value": "4", "method": "assembled"}));
}

#[test]
fn module_table_text_and_json() {
    let o = qf2(&["module-table", "--order", "3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "sigma2*1 = D2 - 1/2*(2*q4 + 6*q4^2 + 20*q4^3)*D4");
    assert_eq!(text.lines().count(), 8);

    let v = json(&["module-table", "--order", "2", "--format", "json"]);
    let first = &v["entries"][0];
    assert_eq!(first["generator"], "sigma2");
    let d4 = &first["components"]["D4"];
    assert_eq!(d4["order"], 2);
    assert_eq!(d4["terms"][0], serde_json::json!({"q2": 0, "q4": 1, "num": "-1", "den": "1"}));
}

#[test]
fn order_from_environment() {
    let env = Command::new(env!("CARGO_BIN_EXE_qf2")).args(["module-table"]).env("QF2_ORDER", "1").output().unwrap();
    assert_eq!(stdout(&env).lines().next().unwrap(), "sigma2*1 = D2 - 1/2*(2*q4)*D4");
    let flag =
        Command::new(env!("CARGO_BIN_EXE_qf2")).args(["module-table", "--order", "2"]).env("QF2_ORDER", "1").output().unwrap();
    assert!(stdout(&flag).contains("6*q4^2"));
    let default = qf2(&["module-table"]);
    assert!(stdout(&default).contains("12870*q4^8"));
}

#[test]
fn verification_commands() {
    let o = qf2(&["verify", "--order", "5", "--d-max", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("verify: all checks pass\n"));
    let v = json(&["batyrev", "--order", "4", "--check-iso", "--format", "json"]);
    assert_eq!(v["isomorphism"]["ok"], true);
    let o = qf2(&["batyrev", "--order", "2"]);
    assert!(stdout(&o).contains("x4 * x4 = (q2) + (-2)*x2*x4"));
}

#[test]
fn lm_integrate() {
    let o = qf2(&["lm-integrate", "--b", "3", "--lambda", "2,1", "--psi", "0,1"]);
    assert_eq!(stdout(&o), "3\n");
    let o = qf2(&["lm-integrate", "--b", "3", "--lambda", "2,2", "--psi", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qf2(&["lm-integrate", "--b", "3", "--lambda", "2,1", "--psi", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments() {
    assert_eq!(qf2(&["invariants", "--family", "D4"]).status.code(), Some(2));
    assert_eq!(qf2(&["invariants", "--d-max", "0"]).status.code(), Some(2));
    assert_eq!(qf2(&["module-table", "--order", "x"]).status.code(), Some(2));
    assert_eq!(qf2(&["selftest", "--criterion", "11"]).status.code(), Some(2));
}

#[test]
fn selftest_reports_per_criterion() {
    let o = qf2(&["selftest", "--criterion", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[PASS] criterion 10"));
    let o = qf2(&["selftest", "--criterion", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("d=0: got 0, expected -1/2"));
}

#[test]
fn output_is_deterministic() {
    let args = ["loci", "--family", "dD4", "--d-max", "5", "--method", "both", "--format", "json"];
    assert_eq!(qf2(&args).stdout, qf2(&args).stdout);
}
