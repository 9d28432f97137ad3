use std::process::{Command, Output};

use serde_json::Value;

fn sfavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfavg")).args(args).env_remove("RIGOR_THREADS").output().unwrap()
}

/// Interval endpoints are serialized as directed decimal strings.
fn end(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn constants_json_schema() {
    let out = sfavg(&["constants", "prod_ram", "H1", "--prime-limit", "1000000"]);
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in ["name", "lo", "hi", "prime_limit", "time_ms"] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(r["prime_limit"], 1_000_000);
    }
    let (lo, hi) = (rows[0]["lo"].as_f64().unwrap(), rows[0]["hi"].as_f64().unwrap());
    assert!(lo <= 9.37530668903219 && hi >= 9.37522491513744);
}

#[test]
fn estimate_critical_even_modulus() {
    let v = json(&sfavg(&["estimate", "one_over_phi", "--q", "2", "--method", "critical", "--prime-limit", "1000000"]));
    let r = &v["report"];
    let c = end(&r["error_constant"]["hi"]);
    assert!((c - 2.168).abs() < 1e-3, "{c}");
    assert_eq!(end(&r["error_exponent"]["lo"]), 0.5);
    assert_eq!(v["fell_back"], false);
}

#[test]
fn estimate_convolution_constant() {
    let v = json(&sfavg(&["estimate", "one_over_phi", "--method", "convolution", "--delta", "1/3", "--prime-limit", "1000000"]));
    let c = end(&v["report"]["error_constant"]["hi"]);
    assert!((c - 7.3598).abs() < 1e-3);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(sfavg(&["constants", "nope"]).status.code(), Some(2));
    assert_eq!(sfavg(&["estimate", "unit", "--method", "convolution", "--prime-limit", "100000"]).status.code(), Some(2));
    assert_eq!(sfavg(&["estimate", "one_over_phi", "--prime-limit", "100"]).status.code(), Some(2));
    assert_eq!(sfavg(&["estimate", "one_over_p_alpha"]).status.code(), Some(2));
    assert_eq!(sfavg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_emits_csv_and_succeeds() {
    let out = sfavg(&["verify", "unit", "--xmax", "1e4", "--prime-limit", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("X,partial_sum,main,residual,bound,margin\n"));
    assert!(csv.lines().count() > 12_000);
}

#[test]
fn verify_with_large_delta() {
    let out = sfavg(&["verify", "one_over_p", "--method", "convolution", "--delta", "0.49", "--xmax", "1e4", "--prime-limit", "1000000", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&sfavg(&["estimate", "one_over_p", "--method", "convolution", "--delta", "0.49", "--prime-limit", "1000000"]));
    assert!(end(&v["report"]["error_constant"]["lo"]) > 15.0);
}

#[test]
fn output_does_not_depend_on_threads() {
    let args = ["verify", "one_over_phi", "--q", "3", "--xmax", "3e4", "--prime-limit", "100000"];
    let a = sfavg(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_sfavg")).args(args).env("RIGOR_THREADS", "4").output().unwrap();
    let c = sfavg(&[&args[..], &["--threads", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn comparison_table() {
    let v = json(&sfavg(&["compare-ra13", "--format", "json", "--prime-limit", "1000000"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.iter().map(|r| r["q"].as_u64().unwrap()).collect::<Vec<_>>(), vec![2, 3, 5, 6, 10, 14]);
    assert!(rows.iter().all(|r| r["verdict"] == "improved"));
    assert!((rows[0]["theirs"][0].as_f64().unwrap() - 4.956).abs() < 1e-9);
    assert_eq!(v["j_tail_inequality_p3"], true);
}

#[test]
fn text_format_uses_six_digits() {
    let out = sfavg(&["constants", "H2", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "H2 [0.594715, 0.594716]\n");
}
