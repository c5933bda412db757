use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-envelope"))
        .args(args)
        .output()
        .expect("spawn jacobi-envelope")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn verify_args<'a>(check: &'a str, k: &'a str, alphas: &'a str, betas: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![
        "verify", "--check", check, "--k-range", k, "--alpha-set", alphas, "--beta-set", betas, "--samples", "1000",
        "--seed", "7", "--out", out,
    ]
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_prints_legendre_value() {
    let o = bin(&["eval", "--k", "1", "--alpha", "0", "--beta", "0", "--x", "0.5", "--what", "poly"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("value = 0.5"));
}

#[test]
fn eval_quantities_agree_with_library() {
    use jacobi_envelope::{eval_z, JacobiParams};
    let o = bin(&["eval", "--k", "7", "--alpha", "3.3", "--beta", "0.7", "--x", "0.2", "--what", "Z"]);
    assert_eq!(o.status.code(), Some(0));
    let printed: f64 = stdout(&o).trim().strip_prefix("Z = ").unwrap().parse().unwrap();
    let direct = eval_z(&JacobiParams::new(7, 3.3, 0.7).unwrap(), 0.2).unwrap();
    assert!((printed - direct).abs() <= 1e-11 * direct.abs());
}

#[test]
fn window_prints_all_ends() {
    let o = bin(&["window", "--k", "1", "--alpha", "2", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for key in ["delta_-1", "delta_1", "gamma_-1", "gamma_1", "N_-1", "N_1", "N'_-1", "N'_1", "x0", "theta"] {
        assert!(out.lines().any(|l| l.starts_with(&format!("{key} = "))), "missing {key}: {out}");
    }
    let value = |key: &str| -> f64 {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value("delta_1") - 0.77058).abs() < 5e-6);
    assert!((value("gamma_1") - 0.66384).abs() < 5e-6);
}

#[test]
fn sonin_prints_summary() {
    let o = bin(&["sonin", "--k", "5", "--alpha", "2", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for key in ["x0 = ", "theta = ", "S(x0) = ", "max|Z| = ", "bracket = "] {
        assert!(out.contains(key), "missing {key}: {out}");
    }
}

#[test]
fn verify_json_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, csv) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("a.csv"));
    let mut args = verify_args("theorem1", "1:6", "0,0.5,2", "0,1", path_str(&a));
    args.extend(["--csv", path_str(&csv)]);
    assert_eq!(bin(&args).status.code(), Some(0));
    assert_eq!(bin(&verify_args("theorem1", "1:6", "0,0.5,2", "0,1", path_str(&b))).status.code(), Some(0));
    let (ja, jb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ja, jb, "same argv and seed must give identical bytes");

    let doc: Value = serde_json::from_slice(&ja).unwrap();
    for key in ["tool_version", "seed", "grid", "items", "summary"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["seed"], 7);
    let items = doc["items"].as_array().unwrap();
    assert_eq!(items.len(), 6 * 3 * 2);
    let skipped: Vec<_> = items.iter().filter(|i| i["skipped"] == Value::Bool(true)).collect();
    // (0,1) and (0.5,1) per degree.
    assert_eq!(skipped.len(), 6 * 2);
    assert!(skipped.iter().all(|i| i["params"]["beta"].as_f64() > i["params"]["alpha"].as_f64()));
    for i in items.iter().filter(|i| i["skipped"] == Value::Bool(false)) {
        assert_eq!(i["pass"], Value::Bool(true));
        assert!(i["witness_x"].is_number());
    }

    let text = String::from_utf8(ja).unwrap();
    assert!(text.contains("\"pass\": true"));
    assert!(text.contains("\"rhs\": 1.1582921852882690e0"), "17 significant digits");

    let csv_text = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        csv_text.lines().next(),
        Some("k,alpha,beta,check,lhs,rhs,margin,pass,skipped,witness_x,note")
    );
    assert_eq!(csv_text.lines().count(), 1 + items.len());
}

#[test]
fn acceptance_sweep_example_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = bin(&[
        "verify", "--check", "theorem1", "--k-range", "1:40", "--alpha-set", "0,0.5,1,2,5,10,25,100", "--beta-set",
        "0,0.5,1,2,5,10,25,100", "--samples", "4000", "--seed", "7", "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["summary"]["failed"], 0);
}

#[test]
fn theorem2_outside_domain_names_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t2.json");
    let o = bin(&verify_args("theorem2", "1:5", "1,2", "0.5,1", path_str(&out)));
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("theorem2 requires k ≥ 6, α ≥ β ≥ (1+√2)/4"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn other_verify_checks_run() {
    let dir = tempfile::tempdir().unwrap();
    for check in ["theorem2", "identities", "grmax"] {
        let out = dir.path().join(format!("{check}.json"));
        let o = bin(&verify_args(check, "6:8", "1,5", "0.61,1", path_str(&out)));
        assert_eq!(o.status.code(), Some(0), "{check}: {}", stdout(&o));
        assert!(out.exists());
    }
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let out = path_str(&out);
    assert_eq!(bin(&verify_args("theorem1", "5:1", "0", "0", out)).status.code(), Some(2));
    assert_eq!(bin(&verify_args("theorem1", "1-5", "0", "0", out)).status.code(), Some(2));
    assert_eq!(bin(&verify_args("theorem1", "1:5", "0,x", "0", out)).status.code(), Some(2));
    assert_eq!(bin(&verify_args("theorem3", "1:5", "0", "0", out)).status.code(), Some(2));
    assert_eq!(bin(&["eval", "--k", "1", "--alpha", "0", "--beta", "0", "--x", "0", "--bogus"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "--k", "1", "--alpha", "-2", "--beta", "0", "--x", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["lemmas", "--trials", "10", "--seed", "1", "--corner-bias", "1.5"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
}

#[test]
fn lemmas_and_conjecture() {
    let o = bin(&["lemmas", "--trials", "300", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("failed = 0"));

    let o = bin(&["conjecture", "--k", "60", "--alpha", "1", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("plateau_ratio = ") && stdout(&o).contains("mass = "));

    let o = bin(&["conjecture", "--k", "60", "--alpha", "1", "--beta", "0.5", "--min-mass", "2"]);
    assert_eq!(o.status.code(), Some(1), "unmet threshold is a check failure");
}
