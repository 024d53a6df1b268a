use std::process::Command;

use serde_json::Value;
use superber::json;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superber"))
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn expand_json_and_csv_agree() {
    let spec = data("spectrum_1_2.json");
    for region in ["0", "1", "2"] {
        let base = ["expand", "--input", &spec, "--region", region, "--from", "-4", "--to", "4"];
        let (code, js, _) = run(&[&base[..], &["--format", "json"]].concat());
        assert_eq!(code, 0);
        let (code, csv, _) = run(&[&base[..], &["--format", "csv"]].concat());
        assert_eq!(code, 0);
        let from_json = json::window_from_json(&serde_json::from_str::<Value>(&js).unwrap()).unwrap();
        let from_csv = json::window_from_csv(region.parse().unwrap(), &csv, 0).unwrap();
        for (n, c) in &from_json.coeffs {
            let other = from_csv.coeffs.get(n).cloned().unwrap_or_else(|| superber::GrassmannElement::zero(0));
            assert_eq!(*c, other, "N = {n}");
        }
    }
}

#[test]
fn first_coefficients_near_zero() {
    let (code, js, _) = run(&["expand", "--input", &data("spectrum_1_2.json"), "--region", "0", "--from", "0", "--to", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&js).unwrap();
    let w = json::window_from_json(&v).unwrap();
    assert!(w.coeffs[&0].is_one());
    assert!(w.coeffs[&1].is_zero());
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join("superber-cli-bad.json");
    std::fs::write(&dir, "{not json").unwrap();
    let (code, _, err) = run(&["expand", "--input", dir.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["error"], "parse");
}

#[test]
fn unordered_spectrum_exits_two() {
    let dir = std::env::temp_dir().join("superber-cli-unordered.json");
    std::fs::write(&dir, r#"{"x": ["1"], "y": ["2", "1"]}"#).unwrap();
    let (code, _, _) = run(&["verify", "gamma", "--input", dir.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn generator_cap_from_environment() {
    let dir = std::env::temp_dir().join("superber-cli-gens.json");
    std::fs::write(&dir, r#"{"x": [[{"gens": [], "coeff": "3"}, {"gens": [1, 2], "coeff": "1"}]], "y": ["1"]}"#).unwrap();
    let out = bin()
        .args(["expand", "--input", dir.to_str().unwrap()])
        .env("SUPERBER_MAX_GENERATORS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["expand", "--input", dir.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_families_pass() {
    let spec = data("spectrum_1_2.json");
    for kind in ["recurrence", "gamma", "duality"] {
        let (code, _, err) = run(&["verify", kind, "--input", &spec]);
        assert_eq!(code, 0, "{kind}: {err}");
    }
    let (code, _, _) = run(&["verify", "region", "--input", &spec, "--s", "1", "--pmax", "30", "--tol", "1e-6"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "forms", "--input", &data("witness_2_1.json")]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "deltas", "--seed", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn region_without_convergence_fails() {
    let (code, out, _) = run(&[
        "verify", "region", "--input", &data("annulus_2_3.json"), "--s", "1", "--pmax", "4", "--tol", "1e-9",
    ]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn non_form_fails_verification() {
    let space = superber::vzforms::FormSpace::new(1, 1, 0, 0).unwrap();
    let l = &space.var(space.x1(0)) * &space.var(space.xh(0));
    let f = superber::vzforms::FormCandidate::new(space, l).unwrap();
    let path = std::env::temp_dir().join("superber-cli-nonform.json");
    std::fs::write(&path, json::form_to_json(&f).to_string()).unwrap();
    let (code, _, _) = run(&["verify", "forms", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn ber_of_matrix_file() {
    let path = std::env::temp_dir().join("superber-cli-matrix.json");
    std::fs::write(&path, r#"{"dim": {"even": 1, "odd": 1}, "entries": [["6", "0"], ["0", "3"]]}"#).unwrap();
    let (code, out, _) = run(&["ber", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ber"][0]["coeff"], "2");
}

#[test]
fn quick_selftest_with_other_seed() {
    let (code, out, _) = run(&["selftest", "--quick", "--seed", "7"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
}
