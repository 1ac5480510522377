use std::process::Command;

use serde_json::Value;

fn nklab(args: &[&str], seed_env: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nklab"));
    cmd.args(args).env_remove("NKLAB_SEED");
    if let Some(s) = seed_env {
        cmd.env("NKLAB_SEED", s);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("valid json")
}

fn check_value(v: &Value, name: &str) -> f64 {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn solve_k1_residuals() {
    let (code, out, _) = nklab(&["solve", "--k", "1", "--samples", "64"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ok"], true);
    assert!(check_value(&v, "nk_residual_max") < 1e-12);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 64);
}

#[test]
fn solve_k2_peak() {
    let (code, out, _) = nklab(&["solve", "--k", "2"], None);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["f0"].as_f64().unwrap(), 0.5);
}

#[test]
fn usage_errors() {
    for args in [
        &["solve", "--k", "0"][..],
        &["solve", "--k", "-1"],
        &["classify", "--group", "e8"],
        &["solve", "--samples", "0"],
        &["frobnicate"],
    ] {
        let (code, out, err) = nklab(args, None);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
    let (code, _, err) = nklab(&["solve"], Some("not-a-number"));
    assert_eq!(code, 2);
    assert!(err.contains("NKLAB_SEED"));
}

#[test]
fn solve_csv() {
    let (code, out, _) = nklab(&["solve", "--samples", "5", "--format", "csv"], None);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,f,fp,h,a1,a2,a3,u");
    assert_eq!(lines.len(), 6);
}

#[test]
fn curvature_k1_round() {
    let (code, out, _) = nklab(&["curvature", "--k", "1", "--planes", "200", "--seed", "0"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["sectional_mean"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-4);
    assert!(v["sectional_spread"].as_f64().unwrap() < 1e-4);
    assert!(v["reports"][0]["einstein_lambda"].as_f64().unwrap() > 0.0);
    assert!(v["reports"][0]["alpha_constant_type"].as_f64().unwrap() > 0.0);
    assert!(v["benchmark"]["max_deviation"].as_f64().unwrap() < 1e-4);
}

#[test]
fn curvature_benchmark() {
    let (code, out, _) = nklab(&["curvature", "--benchmark", "su2"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["report"]["sectional_mean"].as_f64().unwrap() - 0.125).abs() < 1e-4);
}

#[test]
fn curvature_deterministic_and_env_seed() {
    let args = ["curvature", "--planes", "20", "--seed", "3"];
    let (_, a, _) = nklab(&args, None);
    let (_, b, _) = nklab(&args, None);
    assert_eq!(a, b);
    let (_, c, _) = nklab(&["curvature", "--planes", "20", "--seed", "0"], Some("3"));
    assert_eq!(a, c);
    assert_eq!(json(&c)["seed"], 3);
}

#[test]
fn classify_matches_golden() {
    for (group, file) in [("su3", "classify_su3.json"), ("su2xsu2", "classify_su2xsu2.json")] {
        let (code, out, _) = nklab(&["classify", "--group", group], None);
        assert_eq!(code, 0);
        let golden = std::fs::read_to_string(format!("{}/tests/golden/{file}", env!("CARGO_MANIFEST_DIR"))).unwrap();
        assert_eq!(out, golden);
    }
    let v = json(&nklab(&["classify", "--group", "su3"], None).1);
    assert_eq!(v["triples"].as_array().unwrap().len(), 1);
    assert_eq!(v["triples"][0]["H1"], "SU3");
    assert_eq!(v["triples"][0]["model"], "S6");
}

#[test]
fn lemmas_pass() {
    let (code, out, _) = nklab(&["lemmas"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    for l in v["lemmas"].as_array().unwrap() {
        assert!(l["max_relative_deviation"].as_f64().unwrap() < 1e-10);
    }
    assert!(check_value(&v, "gray_defect_max") < 1e-8);
    assert!(v["su2xsu2_d_omega"]["invariant_components_max"].as_f64().unwrap() < 1e-12);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("nklab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (code, out, _) = nklab(&["classify", "--group", "su3", "--output", path.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(json(&std::fs::read_to_string(&path).unwrap())["group"], "SU3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failing_check_exits_one() {
    // roundoff swamps second differences at this step
    let (code, out, err) = nklab(&["curvature", "--benchmark", "su2", "--fd-step", "1e-12"], None);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["failures"][0], "benchmark_su2_max_deviation");
    assert!(!err.is_empty());
}

#[test]
fn in_process_run_matches_binary() {
    let o = nklab::cli::run(["nklab", "classify", "--group", "su3"], None);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, nklab(&["classify", "--group", "su3"], None).1);
}
