//! Browser bindings: region expansions, annulus convergence and the
//! 1|1-form witness checks. Every entry point returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use superber::charfn::Expansion;
use superber::symspaces::{self, body_f64};
use superber::{json as sjson, vzforms};

const MAX_WINDOW: i64 = 40;
const MAX_PMAX: u32 = 60;

fn parse(spectrum: &str) -> Result<superber::charfn::Spectrum, String> {
    let v: Value = serde_json::from_str(spectrum).map_err(|e| e.to_string())?;
    sjson::spectrum_from_json(&v).map_err(|e| e.to_string())
}

/// Coefficients `N ∈ [lo, hi]` in every region `s = 0..=m`.
pub fn expand_regions_json(spectrum: &str, lo: i64, hi: i64) -> Result<String, String> {
    if lo > hi || hi - lo > MAX_WINDOW {
        return Err(format!("window must be nonempty and at most {MAX_WINDOW} wide"));
    }
    let spec = parse(spectrum)?;
    let exp = Expansion::new(&spec).map_err(|e| e.to_string())?;
    let mut regions = Vec::new();
    for s in 0..=spec.m() {
        let mut coeffs = Vec::new();
        for n in lo..=hi {
            let c = exp.coeff(s, n).map_err(|e| e.to_string())?;
            coeffs.push(json!({"N": n, "value": c.to_string(), "body": body_f64(&c)}));
        }
        regions.push(json!({"s": s, "coeffs": coeffs}));
    }
    let poles: Vec<String> = spec.y().iter().map(|y| format!("-1/({y})")).collect();
    Ok(json!({"n": spec.n(), "m": spec.m(), "poles": poles, "regions": regions}).to_string())
}

/// Error of the truncated supertrace against the exact coefficient, per
/// truncation order.
pub fn annulus_convergence_json(spectrum: &str, s: usize, n: i64, p_max: u32) -> Result<String, String> {
    let spec = parse(spectrum)?;
    let m = spec.m();
    if s == 0 || s >= m {
        return Err(format!("region {s} is not an intermediate annulus (need 0 < s < {m})"));
    }
    let p_max = p_max.min(MAX_PMAX);
    let exp = Expansion::new(&spec).map_err(|e| e.to_string())?;
    let target = exp.coeff(s, n).map_err(|e| e.to_string())?;
    let tr = symspaces::supertrace(&spec, s, n, p_max).map_err(|e| e.to_string())?;
    let sign_odd = n.rem_euclid(2) == 1;
    let errors: Vec<f64> = tr
        .partial_sums
        .iter()
        .map(|p| {
            let p = if sign_odd { -p } else { p.clone() };
            (&p - &target).max_abs_coefficient()
        })
        .collect();
    Ok(json!({
        "target": target.to_string(),
        "rho": tr.rho,
        "errors": errors,
    })
    .to_string())
}

/// Condition report for the Berezinian witness on an `n|1` space.
pub fn witness_report_json(n: usize) -> Result<String, String> {
    if n == 0 || n > 4 {
        return Err("n must be between 1 and 4".into());
    }
    let f = vzforms::ber_witness(n, 1).map_err(|e| e.to_string())?;
    let summary = vzforms::summarize(&f).map_err(|e| e.to_string())?;
    let chart = vzforms::descend(&f, 0).map_err(|e| e.to_string())?;
    Ok(json!({
        "L": f.l.to_string(),
        "summary": summary,
        "chart_omega": chart.omega.to_string(),
    })
    .to_string())
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn expand_regions(spectrum: &str, lo: i32, hi: i32) -> Result<String, JsValue> {
    to_js(expand_regions_json(spectrum, lo as i64, hi as i64))
}

#[wasm_bindgen]
pub fn annulus_convergence(spectrum: &str, s: u32, n: i32, p_max: u32) -> Result<String, JsValue> {
    to_js(annulus_convergence_json(spectrum, s as usize, n as i64, p_max))
}

#[wasm_bindgen]
pub fn witness_report(n: u32) -> Result<String, JsValue> {
    to_js(witness_report_json(n as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"{"x": ["3"], "y": ["1", "2"]}"#;

    #[test]
    fn regions_cover_all_annuli() {
        let v: Value = serde_json::from_str(&expand_regions_json(SPEC, -2, 2).unwrap()).unwrap();
        assert_eq!(v["regions"].as_array().unwrap().len(), 3);
        assert_eq!(v["regions"][1]["coeffs"][1]["value"], "-1/2");
    }

    #[test]
    fn annulus_errors_shrink() {
        let v: Value = serde_json::from_str(&annulus_convergence_json(SPEC, 1, 0, 20).unwrap()).unwrap();
        let errs: Vec<f64> = v["errors"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
        assert!(errs.last().unwrap() < &1e-5);
        assert!(annulus_convergence_json(SPEC, 0, 0, 5).is_err());
    }

    #[test]
    fn witness_passes() {
        let v: Value = serde_json::from_str(&witness_report_json(2).unwrap()).unwrap();
        assert!(v["summary"]["report"]["conditions"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
}
