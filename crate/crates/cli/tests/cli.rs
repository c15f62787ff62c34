use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn magica(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_magica"))
        .args(args)
        .env_remove("MAGICA_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn magica");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().expect("wait")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn zero_jordan(a: usize) -> Value {
    let off = serde_json::json!({ "coeffs": vec!["0"; a], "dim": a });
    serde_json::json!({ "diag": ["0", "0", "0"], "off": [off.clone(), off.clone(), off] })
}

fn point(a: usize, alpha: &str, a_diag: [&str; 3]) -> String {
    let mut p = serde_json::json!({ "alpha": alpha, "A": zero_jordan(a), "B": zero_jordan(a), "beta": "0" });
    p["A"]["diag"] = serde_json::json!(a_diag);
    p.to_string()
}

#[test]
fn calibrate_prints_the_normalized_quartic() {
    let out = magica(&["calibrate", "--algebra", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rec = &v[0]["calibration"];
    let coeffs: Vec<&str> = rec["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["9/1", "-18/1", "9/1", "36/1", "36/1", "-36/1"]);
    assert_eq!(rec["nullspace_dim"], 1);
}

#[test]
fn classify_x0_and_sigma_plus_point() {
    for a in [1usize, 2, 4] {
        let out = magica(&["classify", "--algebra", &a.to_string()], Some(&point(a, "1", ["0", "0", "0"])));
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["label"], "ClosedOrbitG");
        assert_eq!(v["hessian_rank"], 1);
        assert_eq!(v["kernel_dim"], 6 * a + 7);

        let out = magica(&["classify", "--algebra", &a.to_string()], Some(&point(a, "0", ["1", "1", "0"])));
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["label"], "SigmaPlus");
        assert_eq!(v["hessian_rank"], a + 3);
        assert_eq!(v["kernel_dim"], 5 * a + 5);
    }
}

#[test]
fn sampled_points_classify_to_their_label() {
    for label in ["ClosedOrbitG", "SigmaPlus", "TauSmooth", "Ambient"] {
        let out = magica(&["sample", "--algebra", "1", "--label", label, "--count", "3", "--seed", "4"], None);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let out = magica(&["classify", "--algebra", "1"], Some(&text));
        assert_eq!(out.status.code(), Some(0));
        for r in json(&out).as_array().unwrap() {
            assert_eq!(r["label"], label);
        }
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(magica(&["verify", "--algebra", "9"], None).status.code(), Some(2));
    assert_eq!(magica(&["verify", "--trials", "0"], None).status.code(), Some(2));
    assert_eq!(magica(&["classify", "--algebra", "1"], Some("{not json")).status.code(), Some(2));
    assert_eq!(magica(&["classify", "--algebra", "2"], Some(&point(1, "1", ["0", "0", "0"]))).status.code(), Some(2));
    assert_eq!(magica(&["sample", "--algebra", "1", "--label", "nowhere"], None).status.code(), Some(2));
    assert_eq!(magica(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--algebra", "1", "--trials", "4", "--seed", "9"];
    let a = magica(&args, None);
    let b = magica(&args, None);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for c in v[0]["checks"].as_array().unwrap() {
        assert_ne!(c["status"], "fail", "{c}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_magica"))
            .args(["sample", "--algebra", "1", "--label", "Ambient"])
            .env("MAGICA_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let explicit = magica(&["sample", "--algebra", "1", "--label", "Ambient", "--seed", "5"], None).stdout;
    assert_eq!(run("5"), explicit);
    assert_ne!(run("6"), explicit);
}

#[test]
fn perturbed_quartic_is_caught_with_a_counterexample() {
    let out = magica(&["verify", "--algebra", "1", "--trials", "10", "--perturb-coeff", "3"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let checks = v[0]["checks"].as_array().unwrap();
    let inv = checks.iter().find(|c| c["id"] == "symmetry.invariance").unwrap();
    assert_eq!(inv["status"], "fail");
    assert!(inv["counterexample"].is_object());
    let phi = checks.iter().find(|c| c["id"] == "freudenthal.phi_vanishing").unwrap();
    assert_eq!(phi["status"], "fail");
}

#[test]
fn polar_and_tangent_cone_report() {
    let out = magica(&["polar", "--algebra", "2", "--seed", "3"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = magica(&["tangent-cone", "--algebra", "1"], Some(&point(1, "1", ["0", "0", "0"])));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["multiplicity"], 2);
    assert_eq!(v["hessian_rank"], 1);
}
