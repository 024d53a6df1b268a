//! Checks for 1|1-forms `L(x_1 | x_1̂)` on an `n|m`-dimensional space.
//!
//! Components are indexed in block order: `a < n` is an even index
//! (parity 0), `a ≥ n` is the odd index `(a − n + 1)^` (parity 1).
//! `x1_a` has parity `ã`, `xh_a` parity `ã + 1` and `dxh_a` parity `ã`.
//! The even components `xh_μ̂` may carry negative powers.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Parity};
use crate::superring::{SuperPolynomial, Variable, VariableTable};
use crate::supermatrix::SuperMatrix;

#[derive(Clone, Debug)]
pub struct FormSpace {
    pub n: usize,
    pub m: usize,
    /// Number of even constants `C_1, …` at the front of the table.
    pub constants: usize,
    pub generators: u8,
    pub table: Arc<VariableTable>,
}

fn component_name(n: usize, a: usize) -> String {
    if a < n {
        format!("{}", a + 1)
    } else {
        format!("h{}", a - n + 1)
    }
}

impl FormSpace {
    pub fn new(n: usize, m: usize, constants: usize, generators: u8) -> Result<Self> {
        let mut vars: Vec<Variable> = (1..=constants).map(|i| Variable::even(format!("C{i}"))).collect();
        let dim = n + m;
        let parity = |a: usize| Parity::from_bit(usize::from(a >= n));
        for a in 0..dim {
            vars.push(Variable::with_parity(format!("x1_{}", component_name(n, a)), parity(a), false));
        }
        for a in 0..dim {
            let p = parity(a).flip();
            vars.push(Variable::with_parity(
                format!("xh_{}", component_name(n, a)),
                p,
                p == Parity::Even,
            ));
        }
        for a in 0..dim {
            vars.push(Variable::with_parity(format!("dxh_{}", component_name(n, a)), parity(a), false));
        }
        Ok(FormSpace {
            n,
            m,
            constants,
            generators,
            table: VariableTable::new(vars)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn index_parity(&self, a: usize) -> Parity {
        Parity::from_bit(usize::from(a >= self.n))
    }

    pub fn constant(&self, i: usize) -> usize {
        i
    }

    pub fn x1(&self, a: usize) -> usize {
        self.constants + a
    }

    pub fn xh(&self, a: usize) -> usize {
        self.constants + self.dim() + a
    }

    pub fn dxh(&self, a: usize) -> usize {
        self.constants + 2 * self.dim() + a
    }

    pub fn var(&self, i: usize) -> SuperPolynomial {
        SuperPolynomial::var_at(&self.table, self.generators, i)
    }

    fn x1_vars(&self) -> Vec<usize> {
        (0..self.dim()).map(|a| self.x1(a)).collect()
    }

    fn xh_vars(&self) -> Vec<usize> {
        (0..self.dim()).map(|a| self.xh(a)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct FormCandidate {
    pub space: FormSpace,
    pub l: SuperPolynomial,
}

impl FormCandidate {
    pub fn new(space: FormSpace, l: SuperPolynomial) -> Result<Self> {
        if !Arc::ptr_eq(l.table(), &space.table) && **l.table() != *space.table {
            return Err(Error::TableMismatch);
        }
        Ok(FormCandidate { space, l })
    }

    /// `L = Σ_a x1_a · L_a`.
    pub fn from_components(space: FormSpace, comps: &[SuperPolynomial]) -> Result<Self> {
        if comps.len() != space.dim() {
            return Err(Error::DimensionMismatch("one component per index".into()));
        }
        let mut l = SuperPolynomial::zero(&space.table, space.generators);
        for (a, c) in comps.iter().enumerate() {
            l = &l + &(&space.var(space.x1(a)) * c);
        }
        FormCandidate::new(space, l)
    }
}

fn x1_linear(f: &FormCandidate) -> bool {
    f.l.degrees_in(&f.space.x1_vars()).iter().all(|&d| d == 1)
}

/// Components `L_a` with `L = x1_a L_a`.
pub fn decompose(f: &FormCandidate) -> Result<Vec<SuperPolynomial>> {
    if !x1_linear(f) {
        return Err(Error::NonlinearInEvenArguments(
            "every term must have degree one in x1".into(),
        ));
    }
    Ok((0..f.space.dim()).map(|a| f.l.lderiv_at(f.space.x1(a))).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub condition: String,
    pub passed: bool,
    /// Rendered residual for failures.
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

fn result_of(name: &str, residuals: &[SuperPolynomial]) -> ConditionResult {
    let bad: Vec<String> = residuals
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.to_string())
        .collect();
    ConditionResult {
        condition: name.to_string(),
        passed: bad.is_empty(),
        residual: if bad.is_empty() { None } else { Some(bad.join("; ")) },
    }
}

/// Residuals of `∂L_a/∂xh_b − (−1)^{(ã+1)(b̃+1)} ∂L_b/∂xh_a` over `a ≤ b`.
fn pde_residuals(
    comps: &[SuperPolynomial],
    coord: impl Fn(usize) -> usize,
    parity: impl Fn(usize) -> Parity,
) -> Vec<SuperPolynomial> {
    let mut out = Vec::new();
    for a in 0..comps.len() {
        for b in a..comps.len() {
            let lhs = comps[a].lderiv_at(coord(b));
            let rhs = comps[b].lderiv_at(coord(a));
            let sign_odd = parity(a).flip().is_odd() && parity(b).flip().is_odd();
            out.push(if sign_odd { &lhs + &rhs } else { &lhs - &rhs });
        }
    }
    out
}

pub fn pde_holds(f: &FormCandidate) -> Result<bool> {
    let comps = decompose(f)?;
    let s = &f.space;
    Ok(pde_residuals(&comps, |a| s.xh(a), |a| s.index_parity(a))
        .iter()
        .all(|r| r.is_zero()))
}

fn euler(p: &SuperPolynomial, vars: &[usize], space: &FormSpace) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(p.table(), p.generators());
    for &v in vars {
        out = &out + &(&space.var(v) * &p.lderiv_at(v));
    }
    out
}

/// Evaluates linearity, PDE', BER1', BER2' and homogeneity of degree −1.
pub fn check(f: &FormCandidate) -> ConditionReport {
    let s = &f.space;
    let mut conditions = Vec::new();
    let linear = x1_linear(f);
    conditions.push(ConditionResult {
        condition: "linearity".into(),
        passed: linear,
        residual: if linear {
            None
        } else {
            Some(f.l.filter_terms(|e| s.x1_vars().iter().map(|&v| e[v]).sum::<i32>() != 1).to_string())
        },
    });
    match decompose(f) {
        Ok(comps) => {
            conditions.push(result_of(
                "PDE'",
                &pde_residuals(&comps, |a| s.xh(a), |a| s.index_parity(a)),
            ));
            let mut ber1 = SuperPolynomial::zero(&s.table, f.l.generators());
            for (a, c) in comps.iter().enumerate() {
                ber1 = &ber1 + &(&s.var(s.xh(a)) * c);
            }
            conditions.push(result_of("BER1'", &[ber1]));
        }
        Err(_) => {
            for name in ["PDE'", "BER1'"] {
                conditions.push(ConditionResult {
                    condition: name.into(),
                    passed: false,
                    residual: Some("not linear in x1".into()),
                });
            }
        }
    }
    let ber2 = &euler(&f.l, &s.xh_vars(), s) + &f.l;
    conditions.push(result_of("BER2'", &[ber2]));
    let homogeneous = f.l.degrees_in(&s.xh_vars()).iter().all(|&d| d == -1);
    conditions.push(ConditionResult {
        condition: "homogeneity".into(),
        passed: homogeneous,
        residual: if homogeneous {
            None
        } else {
            Some(
                f.l.filter_terms(|e| s.xh_vars().iter().map(|&v| e[v]).sum::<i32>() != -1)
                    .to_string(),
            )
        },
    });
    ConditionReport { conditions }
}

/// `ω_L = Σ_a dxh_a · L_a`.
pub fn omega(f: &FormCandidate) -> Result<SuperPolynomial> {
    let comps = decompose(f)?;
    let s = &f.space;
    let mut out = SuperPolynomial::zero(&s.table, f.l.generators());
    for (a, c) in comps.iter().enumerate() {
        out = &out + &(&s.var(s.dxh(a)) * c);
    }
    Ok(out)
}

/// `Σ_b dv_b · ∂ω/∂v_b` over `(v_b, dv_b)` pairs.
pub fn exterior_d(omega: &SuperPolynomial, pairs: &[(usize, usize)]) -> SuperPolynomial {
    let table = omega.table();
    let g = omega.generators();
    let mut out = SuperPolynomial::zero(table, g);
    for &(v, dv) in pairs {
        let dv = SuperPolynomial::var_at(table, g, dv);
        out = &out + &(&dv * &omega.lderiv_at(v));
    }
    out
}

pub fn d(space: &FormSpace, omega: &SuperPolynomial) -> SuperPolynomial {
    let pairs: Vec<_> = (0..space.dim()).map(|a| (space.xh(a), space.dxh(a))).collect();
    exterior_d(omega, &pairs)
}

pub fn is_closed(space: &FormSpace, omega: &SuperPolynomial) -> bool {
    d(space, omega).is_zero()
}

/// `T^G_F` for `(F, G) ∈ {1, 1̂}²`, keyed `"FG"` with `h` for `1̂`.
pub fn stress(f: &FormCandidate) -> Vec<(String, SuperPolynomial)> {
    let s = &f.space;
    let vecs = [("1", s.x1_vars()), ("h", s.xh_vars())];
    let mut out = Vec::new();
    for (fi, (fname, fvars)) in vecs.iter().enumerate() {
        for (gi, (gname, gvars)) in vecs.iter().enumerate() {
            let mut t = SuperPolynomial::zero(&s.table, f.l.generators());
            for (&gv, &fv) in gvars.iter().zip(fvars) {
                t = &t + &(&s.var(gv) * &f.l.lderiv_at(fv));
            }
            if fi == gi {
                // (−1)^{F̃} δ^F_G L
                t = if fi == 0 { &t - &f.l } else { &t + &f.l };
            }
            out.push((format!("{fname}{gname}"), t));
        }
    }
    out
}

/// Chart form on `{xh_α ≠ 0}` with `u_a = xh_a / xh_α`.
#[derive(Clone, Debug)]
pub struct ChartForm {
    pub alpha: usize,
    pub table: Arc<VariableTable>,
    /// `L̄_a` for every index, with `u_α = 1`.
    pub components: Vec<SuperPolynomial>,
    pub omega: SuperPolynomial,
    pub ber1: bool,
    pub pde: bool,
    pub closed: bool,
}

/// Descends to the chart where the odd-block index `alpha` (0-based among
/// the odd indices) is normalised to one.
pub fn descend(f: &FormCandidate, alpha: usize) -> Result<ChartForm> {
    let s = &f.space;
    if alpha >= s.m {
        return Err(Error::InvalidRange(format!("odd index {alpha} with m = {}", s.m)));
    }
    let ia = s.n + alpha;
    let comps = decompose(f)?;
    let others: Vec<usize> = (0..s.dim()).filter(|&a| a != ia).collect();

    let mut vars: Vec<Variable> = (1..=s.constants).map(|i| Variable::even(format!("C{i}"))).collect();
    for &a in &others {
        let p = s.index_parity(a).flip();
        vars.push(Variable::with_parity(
            format!("u_{}", component_name(s.n, a)),
            p,
            p == Parity::Even,
        ));
    }
    for &a in &others {
        vars.push(Variable::with_parity(
            format!("du_{}", component_name(s.n, a)),
            s.index_parity(a),
            false,
        ));
    }
    let chart = VariableTable::new(vars)?;
    let g = f.l.generators();
    let k = s.constants;
    let u = |j: usize| SuperPolynomial::var_at(&chart, g, k + j);
    let du = |j: usize| SuperPolynomial::var_at(&chart, g, k + others.len() + j);

    let mut down = HashMap::new();
    for a in 0..s.dim() {
        down.insert(s.x1(a), SuperPolynomial::zero(&chart, g));
        down.insert(s.dxh(a), SuperPolynomial::zero(&chart, g));
    }
    for (j, &a) in others.iter().enumerate() {
        down.insert(s.xh(a), u(j));
    }
    down.insert(s.xh(ia), SuperPolynomial::one(&chart, g));
    let bars: Vec<SuperPolynomial> = comps
        .iter()
        .map(|c| c.subst_into(&chart, &down))
        .collect::<Result<_>>()?;

    // xh_α · L_a(x) must equal L̄_a(u = xh / xh_α)
    let xa = s.var(s.xh(ia));
    let xa_inv = xa.inverse()?;
    let mut up = HashMap::new();
    for (j, &a) in others.iter().enumerate() {
        up.insert(k + j, &s.var(s.xh(a)) * &xa_inv);
        up.insert(k + others.len() + j, SuperPolynomial::zero(&s.table, g));
    }
    for (a, bar) in bars.iter().enumerate() {
        let lifted = bar.subst_into(&s.table, &up)?;
        if !(&(&xa * &comps[a]) - &lifted).is_zero() {
            return Err(Error::DescentResidual(format!(
                "component {}",
                component_name(s.n, a)
            )));
        }
    }

    let mut ber1 = bars[ia].clone();
    let mut omega = SuperPolynomial::zero(&chart, g);
    for (j, &a) in others.iter().enumerate() {
        ber1 = &ber1 + &(&u(j) * &bars[a]);
        omega = &omega + &(&du(j) * &bars[a]);
    }
    let other_bars: Vec<SuperPolynomial> = others.iter().map(|&a| bars[a].clone()).collect();
    let pde = pde_residuals(&other_bars, |j| k + j, |j| s.index_parity(others[j]))
        .iter()
        .all(|r| r.is_zero());
    let pairs: Vec<_> = (0..others.len()).map(|j| (k + j, k + others.len() + j)).collect();
    let closed = exterior_d(&omega, &pairs).is_zero();
    Ok(ChartForm {
        alpha,
        table: chart,
        components: bars,
        omega,
        ber1: ber1.is_zero(),
        pde,
        closed,
    })
}

/// `L = Σ_i C_i · Ber X^{i1̂}` on an `n|1` space, where `X^{i1̂}` has rows
/// `(x1_i, x1_1̂)` and `(xh_i, xh_1̂)`. For `n = 1` this is `C · Ber X`.
pub fn ber_witness(n: usize, m: usize) -> Result<FormCandidate> {
    if m != 1 || n == 0 {
        return Err(Error::Unsupported(format!(
            "no closed-form witness for dimension {n}|{m}"
        )));
    }
    let space = FormSpace::new(n, 1, n, 0)?;
    let h = n;
    let xhh_inv = space.var(space.xh(h)).inverse()?;
    let mut l = SuperPolynomial::zero(&space.table, 0);
    for i in 0..n {
        // (x1_i − x1_1̂ · xh_1̂⁻¹ · xh_i) · xh_1̂⁻¹
        let schur = &space.var(space.x1(i))
            - &(&(&space.var(space.x1(h)) * &xhh_inv) * &space.var(space.xh(i)));
        let ber = &schur * &xhh_inv;
        l = &l + &(&space.var(space.constant(i)) * &ber);
    }
    FormCandidate::new(space, l)
}

/// Finite (BER) for one even invertible `g` of shape 1|1 acting on the pair
/// `(x1, xh)`: `x1 ↦ g11·x1 + g1h·xh`, `xh ↦ gh1·x1 + ghh·xh`. Returns
/// whether `L(g·x) = L(x)·Ber g`.
pub fn ber_spot_check(f: &FormCandidate, g: &SuperMatrix<GrassmannElement>) -> Result<bool> {
    if g.dim() != (1, 1) {
        return Err(Error::DimensionMismatch("g must be 1|1".into()));
    }
    let gens = g.like().generators().max(f.space.generators);
    let space = FormSpace { generators: gens, ..f.space.clone() };
    let l = f.l.lift_generators(gens)?;
    let e = |i: usize, j: usize| -> Result<SuperPolynomial> {
        Ok(SuperPolynomial::constant(&space.table, g.entry(i, j).lift(gens)?))
    };
    let mut map = HashMap::new();
    for a in 0..space.dim() {
        let x1 = space.var(space.x1(a));
        let xh = space.var(space.xh(a));
        map.insert(space.x1(a), &(&e(0, 0)? * &x1) + &(&e(0, 1)? * &xh));
        map.insert(space.xh(a), &(&e(1, 0)? * &x1) + &(&e(1, 1)? * &xh));
    }
    let transformed = l.subst(&map)?;
    let ber = SuperPolynomial::constant(&space.table, g.ber()?.lift(gens)?);
    Ok((&transformed - &(&l * &ber)).is_zero())
}

/// Every check for one candidate, as used by the verification suites.
#[derive(Clone, Debug, Serialize)]
pub struct FormSummary {
    pub dim: (usize, usize),
    pub report: ConditionReport,
    pub stress_zero: bool,
    pub closed: bool,
    pub charts_closed: Vec<bool>,
}

impl FormSummary {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.stress_zero && self.closed && self.charts_closed.iter().all(|&c| c)
    }
}

pub fn summarize(f: &FormCandidate) -> Result<FormSummary> {
    let report = check(f);
    let stress_zero = stress(f).iter().all(|(_, t)| t.is_zero());
    let closed = is_closed(&f.space, &omega(f)?);
    let mut charts_closed = Vec::new();
    if report.passed() {
        for alpha in 0..f.space.m {
            let c = descend(f, alpha)?;
            charts_closed.push(c.closed && c.ber1 && c.pde);
        }
    }
    Ok(FormSummary {
        dim: (f.space.n, f.space.m),
        report,
        stress_zero,
        closed,
        charts_closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_components() {
        let f = ber_witness(1, 1).unwrap();
        let s = &f.space;
        let comps = decompose(&f).unwrap();
        let c = s.var(s.constant(0));
        let inv = s.var(s.xh(1)).inverse().unwrap();
        assert_eq!(comps[0], &c * &inv);
        let want = -&(&(&c * &s.var(s.xh(0))) * &inv.pow(2).unwrap());
        assert_eq!(comps[1], want);
    }

    #[test]
    fn witnesses_pass() {
        for n in 1..=3 {
            let f = ber_witness(n, 1).unwrap();
            let summary = summarize(&f).unwrap();
            assert!(summary.passed(), "{n}|1: {summary:?}");
        }
        assert!(matches!(ber_witness(1, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn chart_of_one_one_witness() {
        let f = ber_witness(1, 1).unwrap();
        let c = descend(&f, 0).unwrap();
        let want = SuperPolynomial::var_at(&c.table, 0, 0);
        assert_eq!(c.components[0], want);
        assert!(c.closed && c.ber1);
    }

    #[test]
    fn degree_plus_one_fails() {
        let s = FormSpace::new(1, 1, 0, 0).unwrap();
        let l = &s.var(s.x1(0)) * &s.var(s.xh(0));
        let f = FormCandidate::new(s.clone(), l).unwrap();
        let r = check(&f);
        assert!(!r.get("BER2'").unwrap().passed);
        assert!(!r.get("homogeneity").unwrap().passed);
        let t = stress(&f);
        assert!(!t.iter().find(|(k, _)| k == "hh").unwrap().1.is_zero());
    }

    #[test]
    fn nonlinear_rejected() {
        let s = FormSpace::new(1, 1, 0, 0).unwrap();
        let x = s.var(s.x1(0));
        let f = FormCandidate::new(s, &x * &x).unwrap();
        assert!(matches!(decompose(&f), Err(Error::NonlinearInEvenArguments(_))));
        assert!(!check(&f).passed());
    }

    #[test]
    fn unpaired_odd_product_not_closed() {
        let s = FormSpace::new(2, 1, 0, 0).unwrap();
        let w = &s.var(s.dxh(0)) * &s.var(s.xh(1));
        assert!(!is_closed(&s, &w));
        assert!(is_closed(&s, &SuperPolynomial::zero(&s.table, 0)));
    }
}
