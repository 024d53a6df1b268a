//! JSON encodings. Rationals travel as `"p/q"` strings.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::charfn::{CoefficientWindow, Spectrum};
use crate::error::{Error, Result};
use crate::grassmann::{format_rational, parse_rational, GrassmannElement, Parity, Rational, MAX_GENERATORS};
use crate::superring::{SuperPolynomial, Variable, VariableTable};
use crate::supermatrix::SuperMatrix;
use crate::symspaces::{SNsBasisVector, TraceCheckReport};
use crate::vzforms::{FormCandidate, FormSpace};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64").into())),
        _ => Err(parse_err(format!("expected a rational string, got {v}"))),
    }
}

pub fn grassmann_to_json(e: &GrassmannElement) -> Value {
    Value::Array(
        e.terms()
            .map(|(mask, c)| json!({"gens": GrassmannElement::mask_indices(mask), "coeff": format_rational(c)}))
            .collect(),
    )
}

/// Largest generator index mentioned, so that callers can pick `G`.
fn max_generator(v: &Value) -> usize {
    match v {
        Value::Array(terms) => terms
            .iter()
            .filter_map(|t| t.get("gens").and_then(Value::as_array))
            .flat_map(|g| g.iter().filter_map(Value::as_u64))
            .max()
            .unwrap_or(0) as usize,
        _ => 0,
    }
}

/// Accepts the term list, or a bare rational for body-only elements.
pub fn grassmann_from_json(v: &Value, generators: u8) -> Result<GrassmannElement> {
    match v {
        Value::Array(terms) => {
            let mut parsed = Vec::with_capacity(terms.len());
            for t in terms {
                let gens = t
                    .get("gens")
                    .and_then(Value::as_array)
                    .ok_or_else(|| parse_err("term without \"gens\""))?
                    .iter()
                    .map(|g| g.as_u64().map(|g| g as usize).ok_or_else(|| parse_err("generator index")))
                    .collect::<Result<Vec<_>>>()?;
                let coeff = rational_from_json(t.get("coeff").ok_or_else(|| parse_err("term without \"coeff\""))?)?;
                parsed.push((gens, coeff));
            }
            GrassmannElement::from_terms(generators, parsed)
        }
        other => Ok(GrassmannElement::scalar(generators, rational_from_json(other)?)),
    }
}

fn generators_field(obj: &Value, inferred: usize) -> Result<u8> {
    let g = match obj.get("generators") {
        Some(v) => v.as_u64().ok_or_else(|| parse_err("\"generators\" must be an integer"))? as usize,
        None => inferred,
    };
    if g > MAX_GENERATORS {
        return Err(Error::TooManyGenerators(g, MAX_GENERATORS));
    }
    if g < inferred {
        return Err(Error::GeneratorOutOfRange {
            index: inferred,
            generators: g as u8,
        });
    }
    Ok(g as u8)
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(format!("missing array \"{key}\"")))
}

pub fn spectrum_to_json(s: &Spectrum) -> Value {
    json!({
        "generators": s.generators(),
        "x": s.x().iter().map(grassmann_to_json).collect::<Vec<_>>(),
        "y": s.y().iter().map(grassmann_to_json).collect::<Vec<_>>(),
    })
}

pub fn spectrum_from_json(v: &Value) -> Result<Spectrum> {
    let x = array(v, "x")?;
    let y = array(v, "y")?;
    let inferred = x.iter().chain(y).map(max_generator).max().unwrap_or(0);
    let g = generators_field(v, inferred)?;
    let x = x.iter().map(|e| grassmann_from_json(e, g)).collect::<Result<_>>()?;
    let y = y.iter().map(|e| grassmann_from_json(e, g)).collect::<Result<_>>()?;
    Spectrum::new(g, x, y)
}

pub fn matrix_to_json(m: &SuperMatrix<GrassmannElement>) -> Value {
    let (n, k) = m.dim();
    json!({
        "dim": {"even": n, "odd": k},
        "entries": m.entries().iter().map(|r| r.iter().map(grassmann_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<SuperMatrix<GrassmannElement>> {
    let dim = v.get("dim").ok_or_else(|| parse_err("missing \"dim\""))?;
    let size = |k: &str| {
        dim.get(k)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| parse_err(format!("missing dim.{k}")))
    };
    let (n, m) = (size("even")?, size("odd")?);
    let rows = array(v, "entries")?;
    let inferred = rows
        .iter()
        .filter_map(Value::as_array)
        .flatten()
        .map(max_generator)
        .max()
        .unwrap_or(0);
    let g = generators_field(v, inferred)?;
    let entries = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err("matrix row must be an array"))?
                .iter()
                .map(|e| grassmann_from_json(e, g))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SuperMatrix::new(n, m, entries, &GrassmannElement::zero(g))
}

fn parity_str(p: Parity) -> &'static str {
    if p.is_odd() {
        "odd"
    } else {
        "even"
    }
}

pub fn table_to_json(t: &VariableTable) -> Value {
    Value::Array(
        t.vars()
            .iter()
            .map(|v| json!({"name": v.name, "parity": parity_str(v.parity), "laurent": v.laurent}))
            .collect(),
    )
}

pub fn table_from_json(v: &Value) -> Result<Arc<VariableTable>> {
    let vars = v
        .as_array()
        .ok_or_else(|| parse_err("\"vars\" must be an array"))?
        .iter()
        .map(|e| {
            let name = e
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err("variable without name"))?;
            let parity = match e.get("parity").and_then(Value::as_str) {
                Some("even") => Parity::Even,
                Some("odd") => Parity::Odd,
                _ => return Err(parse_err(format!("variable `{name}` needs parity even|odd"))),
            };
            let laurent = e.get("laurent").and_then(Value::as_bool).unwrap_or(false);
            Ok(Variable::with_parity(name, parity, laurent))
        })
        .collect::<Result<Vec<_>>>()?;
    VariableTable::new(vars)
}

pub fn poly_to_json(p: &SuperPolynomial) -> Value {
    json!({
        "generators": p.generators(),
        "vars": table_to_json(p.table()),
        "terms": p.terms().map(|(e, c)| json!({"exps": e, "coeff": grassmann_to_json(c)})).collect::<Vec<_>>(),
    })
}

pub fn poly_from_json(v: &Value) -> Result<SuperPolynomial> {
    let table = table_from_json(v.get("vars").ok_or_else(|| parse_err("missing \"vars\""))?)?;
    let terms = array(v, "terms")?;
    let inferred = terms
        .iter()
        .filter_map(|t| t.get("coeff"))
        .map(max_generator)
        .max()
        .unwrap_or(0);
    let g = generators_field(v, inferred)?;
    let mut out = SuperPolynomial::zero(&table, g);
    for t in terms {
        let exps = t
            .get("exps")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("term without \"exps\""))?
            .iter()
            .map(|e| e.as_i64().map(|e| e as i32).ok_or_else(|| parse_err("exponent")))
            .collect::<Result<Vec<_>>>()?;
        let c = grassmann_from_json(t.get("coeff").ok_or_else(|| parse_err("term without \"coeff\""))?, g)?;
        out = &out + &SuperPolynomial::monomial(&table, exps, c)?;
    }
    Ok(out)
}

pub fn form_to_json(f: &FormCandidate) -> Value {
    json!({
        "dim": {"even": f.space.n, "odd": f.space.m},
        "L": poly_to_json(&f.l),
    })
}

/// `{"dim": {"even": n, "odd": m}, "L": <SuperPolynomial>}`; constants are
/// the variables named `C1, C2, …`.
pub fn form_from_json(v: &Value) -> Result<FormCandidate> {
    let dim = v.get("dim").ok_or_else(|| parse_err("missing \"dim\""))?;
    let n = dim.get("even").and_then(Value::as_u64).ok_or_else(|| parse_err("dim.even"))? as usize;
    let m = dim.get("odd").and_then(Value::as_u64).ok_or_else(|| parse_err("dim.odd"))? as usize;
    let l = poly_from_json(v.get("L").ok_or_else(|| parse_err("missing \"L\""))?)?;
    let constants = l
        .table()
        .vars()
        .iter()
        .filter(|v| v.name.starts_with('C') && v.name[1..].parse::<usize>().is_ok())
        .count();
    let space = FormSpace::new(n, m, constants, l.generators())?;
    let l = l.reembed(&space.table)?;
    FormCandidate::new(space, l)
}

pub fn window_to_json(w: &CoefficientWindow) -> Value {
    let mut coeffs = Map::new();
    for (n, c) in &w.coeffs {
        coeffs.insert(n.to_string(), grassmann_to_json(c));
    }
    json!({"s": w.s, "coeffs": coeffs})
}

pub fn window_from_json(v: &Value) -> Result<CoefficientWindow> {
    let s = v.get("s").and_then(Value::as_u64).ok_or_else(|| parse_err("missing \"s\""))? as usize;
    let obj = v
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("missing \"coeffs\""))?;
    let g = obj.values().map(max_generator).max().unwrap_or(0);
    let mut coeffs = std::collections::BTreeMap::new();
    for (k, c) in obj {
        let n: i64 = k.parse().map_err(|_| parse_err(format!("bad index {k}")))?;
        coeffs.insert(n, grassmann_from_json(c, g as u8)?);
    }
    Ok(CoefficientWindow { s, coeffs })
}

/// One row per `(N, generator subset, coefficient)`; zero coefficients
/// produce no rows.
pub fn window_to_csv(w: &CoefficientWindow) -> String {
    let mut out = String::from("N,gens,coeff\n");
    for (n, c) in &w.coeffs {
        for (mask, r) in c.terms() {
            let gens: Vec<String> = GrassmannElement::mask_indices(mask)
                .iter()
                .map(|g| g.to_string())
                .collect();
            out.push_str(&format!("{n},{},{}\n", gens.join(" "), format_rational(r)));
        }
    }
    out
}

pub fn window_from_csv(s: usize, text: &str, generators: u8) -> Result<CoefficientWindow> {
    let mut coeffs: std::collections::BTreeMap<i64, GrassmannElement> = std::collections::BTreeMap::new();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(parse_err(format!("bad CSV row `{line}`")));
        }
        let n: i64 = cols[0].parse().map_err(|_| parse_err("bad N"))?;
        let gens = cols[1]
            .split_whitespace()
            .map(|g| g.parse::<usize>().map_err(|_| parse_err("bad generator")))
            .collect::<Result<Vec<_>>>()?;
        let term = GrassmannElement::from_terms(generators, [(gens, parse_rational(cols[2])?)])?;
        let entry = coeffs.entry(n).or_insert_with(|| GrassmannElement::zero(generators));
        *entry = &*entry + &term;
    }
    Ok(CoefficientWindow { s, coeffs })
}

pub fn basis_vector_to_json(v: &SNsBasisVector) -> Value {
    json!({"k": v.k, "i": v.i, "j": v.j, "s": v.s})
}

pub fn trace_report_to_json(r: &TraceCheckReport) -> Value {
    Value::Array(
        r.entries
            .iter()
            .map(|e| {
                json!({
                    "N": e.n,
                    "status": e.status.as_str(),
                    "lhs": grassmann_to_json(&e.lhs),
                    "rhs": grassmann_to_json(&e.rhs),
                    "errors": e.errors,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::ratio;

    #[test]
    fn grassmann_round_trip() {
        let e = GrassmannElement::from_terms(3, [(vec![], ratio(1, 2)), (vec![1, 3], ratio(-2, 1))]).unwrap();
        let v = grassmann_to_json(&e);
        assert_eq!(v[1]["gens"], json!([1, 3]));
        assert_eq!(grassmann_from_json(&v, 3).unwrap(), e);
    }

    #[test]
    fn spectrum_with_bare_rationals() {
        let s = spectrum_from_json(&json!({"x": ["3"], "y": ["1", 2]})).unwrap();
        assert_eq!(s.generators(), 0);
        assert_eq!((s.n(), s.m()), (1, 2));
    }

    #[test]
    fn generator_count_is_checked() {
        let v = json!({"generators": 1, "x": [[{"gens": [2], "coeff": "1"}]], "y": ["1"]});
        assert!(spectrum_from_json(&v).is_err());
    }
}
