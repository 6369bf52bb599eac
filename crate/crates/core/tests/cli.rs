mod common;

use common::problems_dir;
use cr_algebraicity::io::cli::{run_command, CommandOutput};
use cr_algebraicity::GaussianRational as GR;
use serde_json::Value;

fn run(args: &[&str]) -> CommandOutput {
    run_command(std::iter::once("cralg").chain(args.iter().copied()))
}

fn problem(name: &str) -> String {
    problems_dir().join(name).to_str().unwrap().to_string()
}

fn json(out: &CommandOutput) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn all_numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if k == "coeff" {
                    out.push(x.as_str().unwrap().to_string());
                }
                all_numbers(x, out);
            }
        }
        Value::Array(a) => a.iter().for_each(|x| all_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn extend_identity_certificate() {
    let out = run(&["extend-map", &problem("quadric_identity.crm"), "--order", "12"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["command"], "extend-map");
    assert_eq!(v["status"], "certified");
    let texts: Vec<&str> = v["components"].as_array().unwrap().iter().map(|c| c["annihilator"]["polynomial"]["text"].as_str().unwrap()).collect();
    assert_eq!(texts, ["F1 - z1", "F2 - z2"]);
}

#[test]
fn rational_map_in_original_coordinates() {
    let out = run(&["extend-map", &problem("quadric_rational.crm")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    let texts: Vec<&str> = v["components"].as_array().unwrap().iter().map(|c| c["annihilator"]["polynomial"]["text"].as_str().unwrap()).collect();
    assert_eq!(texts, ["F1*z2 - z1", "F2*z2 - 1"]);
}

#[test]
fn sqrt_annihilator() {
    let out = run(&["annihilator", &problem("sqrt_series.txt"), "--qmax", "3", "--kmax", "3"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["polynomial"]["text"], "f^2 - t - 1");
    let exps: Vec<Value> = v["polynomial"]["terms"].as_array().unwrap().iter().map(|t| t["exps"].clone()).collect();
    assert_eq!(exps, [serde_json::json!([2, 0]), serde_json::json!([0, 1]), serde_json::json!([0, 0])]);
}

#[test]
fn exponential_not_found() {
    let out = run(&["annihilator", &problem("exp_series.txt")]);
    assert_eq!(out.code, 3);
    let v = json(&out);
    assert_eq!(v["status"], "not_found");
    assert_eq!(v["searched"].as_array().unwrap().last().unwrap(), &serde_json::json!([3, 3]));
}

#[test]
fn order_too_small_is_code_3() {
    let out = run(&["annihilator", &problem("sqrt_series.txt"), "--order", "5"]);
    assert_eq!(out.code, 3);
    assert_eq!(json(&out)["status"], "order_insufficient");
}

#[test]
fn hypothesis_failures() {
    for (file, name) in [("degenerate_cone.crm", "Eq (2.3)"), ("constant_map.crm", "Eq (2.5)"), ("flat_hyperplane.crm", "Eq (2.4)")] {
        let out = run(&["check-map", &problem(file)]);
        assert_eq!(out.code, 1, "{file}");
        assert_eq!(json(&out)["failed"], name, "{file}");
    }
    assert_eq!(run(&["levi", &problem("degenerate_cone.crm")]).code, 1);
    assert_eq!(run(&["levi", &problem("quadric_identity.crm")]).code, 0);
}

#[test]
fn manifold_commands() {
    let f = problem("quadric_identity.crm");
    for cmd in ["check-manifold", "levi", "tangent-ops", "segre"] {
        let out = run(&[cmd, &f]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.stderr);
        assert_eq!(json(&out)["pass"], true, "{cmd}");
    }
    let v = json(&run(&["segre", &f]));
    assert_eq!(v["spanning"]["rank"], 2);
    assert_eq!(v["families"].as_array().unwrap().len(), 2);
    let v = json(&run(&["tangent-ops", &f]));
    assert_eq!(v["operators"][0]["coeffs"][0]["text"], "zb1");
}

#[test]
fn separate_alg_files() {
    let out = run(&["separate-alg", &problem("classical_claim.crm")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(json(&out)["annihilator"]["polynomial"]["text"], "-f*z1*z2 - z1*z2 + f");
    let out = run(&["separate-alg", &problem("quadric_segre_families.crm")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["chart_exact"], true);
    assert_eq!(v["annihilator"]["polynomial"]["text"], "-z1^2 + f - z2");
}

#[test]
fn usage_and_parse_errors() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["levi", "/nonexistent/file.crm"]).code, 2);
    let dir = std::env::temp_dir().join(format!("cralg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.crm");
    std::fs::write(&bad, "n = 2;\nrho1 = z1 + z1*zb1;\n").unwrap();
    let out = run(&["levi", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    let v = json(&out);
    assert_eq!(v["status"], "parse_error");
    assert!(v["error"].as_str().unwrap().contains("not real"), "{}", v["error"]);
    std::fs::write(&bad, "n = 2;\nrho1 = z2 + zb2 + q1;\n").unwrap();
    assert_eq!(run(&["levi", bad.to_str().unwrap()]).code, 2);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn out_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("cralg-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let f = problem("quadric_automorphism.crm");
    let out = run(&["extend-map", &f, "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, run(&["extend-map", &f]).stdout);
    assert_eq!(written, run(&["extend-map", &f]).stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reported_numbers_reparse() {
    let v = json(&run(&["extend-map", &problem("quadric_rational.crm")]));
    let mut nums = Vec::new();
    all_numbers(&v, &mut nums);
    assert!(!nums.is_empty());
    for s in nums {
        let x: GR = s.parse().unwrap();
        assert_eq!(x.to_string(), s);
    }
}
