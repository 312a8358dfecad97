use std::path::Path;
use std::process::{Command, Output};

use fsl_core::cross_ratios::{random_generic_tuple, ConfigTuple};
use fsl_core::forms::FormedSpace;
use fsl_core::linalg::c;
use fsl_core::reduction::{phi2_vector, phi3};
use fsl_core::rng::stream;
use fsl_core::Complex64;
use serde_json::{json, Value};

fn fsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsl"))
        .args(args)
        .env_remove("FSL_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().contains(name))
        .unwrap_or_else(|| panic!("no check {name:?} in {report}"))
}

fn tuple_json(eps: i8, d: u8, r: usize, t: &ConfigTuple) -> String {
    let points: Vec<Vec<Complex64>> = (0..t.len())
        .map(|i| t.vector(i).iter().copied().collect())
        .collect();
    json!({ "eps": eps, "d": d, "r": r, "points": points }).to_string()
}

fn reduce_file(dir: &Path, name: &str, text: &str) -> Output {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    fsl(&["reduce", "--in", path.to_str().unwrap()])
}

#[test]
fn verify_cross_ratios_single_case() {
    let out = fsl(&[
        "verify", "--suite", "cross-ratios", "--eps", "+1", "--d", "0", "--r", "3", "--trials", "1000", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["pass"], true);
    for c in report["checks"].as_array().unwrap() {
        assert!(c["max_residual"].as_f64().unwrap() <= 1e-9, "{c}");
        assert!(c["name"].as_str().unwrap().contains("(eps=+1, d=0, r=3)"));
    }
}

#[test]
fn verify_bbi_value_and_constants() {
    let out = fsl(&["verify", "--suite", "bbi-value", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert!(check(&report, "closed form")["max_residual"].as_f64().unwrap() <= 1e-8);
    let out = fsl(&["verify", "--suite", "constants"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(check(&report, "dynkin index A_r")["max_residual"], 0.0);
    assert!(check(&report, "dynkin index D_r")["note"]
        .as_str()
        .unwrap()
        .starts_with("CONJECTURE"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["verify", "--suite", "dilog", "--trials", "0"],
        vec!["verify", "--suite", "nonsense"],
        vec!["verify", "--suite", "hats", "--eps", "+1"],
        vec!["verify", "--suite", "hats", "--eps", "+1", "--d", "2", "--r", "2"],
        vec!["verify", "--suite", "hats", "--eps", "+1", "--d", "0", "--r", "1"],
        vec!["verify", "--suite", "dilog", "--tol-scale", "0"],
        vec!["estimate-norm", "--cocycle", "b4-so4", "--trials", "0"],
        vec!["estimate-norm", "--cocycle", "nonsense"],
        vec!["frobnicate"],
    ] {
        let out = fsl(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_fsl"))
        .args(["verify", "--suite", "constants"])
        .env("FSL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_checks_exit_with_one() {
    // a threshold scale this small turns round-off into failures
    let out = fsl(&["verify", "--suite", "dilog", "--trials", "200", "--tol-scale", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert_eq!(report["pass"], false);
    assert!(report["first_failure"].as_str().unwrap().starts_with("dilog/"));
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "--suite", "reduction", "--eps", "-1", "--d", "0", "--r", "3", "--trials", "50", "--seed", "3"];
    let strip = |out: &Output| {
        let mut v = json_of(out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        v.to_string()
    };
    let a = fsl(&args);
    let b = fsl(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_fsl"))
        .args(args)
        .env("FSL_THREADS", "1")
        .output()
        .unwrap();
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let d = fsl(&seq_args);
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a), strip(&c));
    let (mut x, mut y) = (json_of(&a), json_of(&d));
    for v in [&mut x, &mut y] {
        let o = v.as_object_mut().unwrap();
        o.remove("wall_time_s");
        o.remove("command");
    }
    assert_eq!(x, y);
}

#[test]
fn reduce_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    // canonical input
    let s = FormedSpace::new(1, 1, 2).unwrap();
    let canon = phi3(&s, (c(0.3, 0.2), c(-0.7, 1.1))).unwrap();
    let out = reduce_file(dir.path(), "canon.json", &tuple_json(1, 1, 2, &canon));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json_of(&out);
    assert!(report["result"]["residual"].as_f64().unwrap() <= 1e-12);
    let a = report["result"]["parameters"]["a"].as_array().unwrap();
    assert!((a[0][0].as_f64().unwrap() - 0.3).abs() < 1e-12);
    // random generic 4- and 5-tuples
    let mut rng = stream(5, "cli-reduce", 0);
    for (eps, d, r) in [(1i8, 0u8, 3usize), (-1, 0, 2), (1, 1, 3)] {
        let s = FormedSpace::new(eps, d, r).unwrap();
        for k in [3, 4, 5] {
            let t = random_generic_tuple(&s, k, &mut rng).unwrap();
            let out = reduce_file(dir.path(), "t.json", &tuple_json(eps, d, r, &t));
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
            let report = json_of(&out);
            assert!(report["result"]["residual"].as_f64().unwrap() <= 1e-8);
            let g = report["result"]["g"].as_array().unwrap();
            assert_eq!(g.len(), s.dim());
            assert_eq!(g[0].as_array().unwrap().len(), s.dim());
            assert_eq!(g[0][0].as_array().unwrap().len(), 2, "complex entries are [re, im]");
            assert_eq!(report["result"]["canonical"].as_array().unwrap().len(), k);
        }
    }
}

#[test]
fn reduce_rejects_the_delta_locus() {
    // ε = −1: Δ = Γ² vanishes when CR₁ + CR₂ = 1. Take Φ₃-like points with
    // a₁ + a₂ = 1 and move the fourth point off the first two hyperbolic
    // planes so the tuple stays in general position.
    let s = FormedSpace::new(-1, 0, 3).unwrap();
    let (a1, a2) = (c(0.3, 0.1), c(0.7, -0.1));
    let v3 = s.e(3) * a1 - s.f(3) * a2 + s.e(1);
    let t = ConfigTuple::from_vectors(&s, vec![s.e(3), s.f(3), phi2_vector(&s).unwrap(), v3]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = reduce_file(dir.path(), "degenerate.json", &tuple_json(-1, 0, 3, &t));
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    let rec = check(&report, "reduce/genericity");
    assert_eq!(rec["pass"], false);
    assert!(rec["note"].as_str().unwrap().contains("Delta"), "{rec}");
}

#[test]
fn reduce_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = reduce_file(dir.path(), "bad.json", "{\"eps\": 1,\n \"d\": 0, \"r\": 2, \"points\": [[1, 2]");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    // not isotropic for the symmetric form
    let e = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]];
    let text = json!({ "eps": 1, "d": 0, "r": 2, "points": [e, e, e] }).to_string();
    assert_eq!(reduce_file(dir.path(), "aniso.json", &text).status.code(), Some(2));
    let text = json!({ "eps": 1, "d": 3, "r": 2, "points": [] }).to_string();
    assert_eq!(reduce_file(dir.path(), "form.json", &text).status.code(), Some(2));
}

#[test]
fn estimate_norm_targets() {
    let out = fsl(&["estimate-norm", "--cocycle", "b4-so4", "--trials", "2000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let ratio = report["result"]["ratio"].as_f64().unwrap();
    assert!((0.98..=1.0001).contains(&ratio), "{ratio}");
    let out = fsl(&["estimate-norm", "--cocycle", "vol-p1"]);
    assert_eq!(out.status.code(), Some(0));
    let est = json_of(&out)["result"]["estimate"].as_f64().unwrap();
    assert!((est - 1.0149).abs() < 5e-4, "{est}");
}

#[test]
fn out_path_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = fsl(&["verify", "--suite", "constants", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}
