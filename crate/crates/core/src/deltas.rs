//! Formal delta functions and integral forms.
//!
//! `δ^{(k)}(t)` is an odd symbol attached to an even variable `t`, subject to
//! `t·δ^{(k)}(t) = −k·δ^{(k−1)}(t)` (so `t·δ(t) = 0`) and
//! `δ^{(k)}(a t) = a^{−(k+1)} δ^{(k)}(t)` with no absolute value.
//! An expression is a sum of terms `c · δ^{(k_1)}(t_{v_1}) ⋯ δ^{(k_r)}(t_{v_r})`
//! with the polynomial coefficient on the left and the deltas ordered by
//! variable.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{rat, GrassmannElement, Parity, Rational};
use crate::superring::{SuperPolynomial, Variable, VariableTable};
use crate::supermatrix::SuperMatrix;

/// `δ^{(order)}` of the table variable with index `var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaFactor {
    pub var: usize,
    pub order: u32,
}

/// A single product `c · δ(…) ⋯ δ(…)` with factors in the given order.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaProduct {
    pub coeff: SuperPolynomial,
    pub factors: Vec<DeltaFactor>,
}

impl DeltaProduct {
    pub fn new(coeff: SuperPolynomial, factors: Vec<DeltaFactor>) -> Result<Self> {
        let table = coeff.table();
        let mut seen = vec![false; table.len()];
        for f in &factors {
            if f.var >= table.len() {
                return Err(Error::UnknownVariable(format!("#{}", f.var)));
            }
            let v = table.var(f.var);
            if v.parity != Parity::Even {
                return Err(Error::OddDeltaArgument(v.name.clone()));
            }
            if std::mem::replace(&mut seen[f.var], true) {
                return Err(Error::DuplicateDeltaArgument(v.name.clone()));
            }
        }
        Ok(DeltaProduct { coeff, factors })
    }
}

type DeltaKey = Vec<DeltaFactor>;

/// Sum of canonical delta products.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSum {
    table: Arc<VariableTable>,
    generators: u8,
    terms: BTreeMap<DeltaKey, SuperPolynomial>,
}

fn factorial_ratio(k: u32, e: u32) -> BigInt {
    // k! / (k − e)!
    ((k - e + 1)..=k).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

impl DeltaSum {
    pub fn zero(table: &Arc<VariableTable>, generators: u8) -> Self {
        DeltaSum {
            table: Arc::clone(table),
            generators,
            terms: BTreeMap::new(),
        }
    }

    /// Sorts the factors of a product; each transposition of two deltas
    /// flips the sign.
    pub fn from_product(p: &DeltaProduct) -> Self {
        let mut factors = p.factors.clone();
        let mut negate = false;
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1].var > factors[j].var {
                factors.swap(j - 1, j);
                negate = !negate;
                j -= 1;
            }
        }
        let coeff = if negate { -&p.coeff } else { p.coeff.clone() };
        let mut out = Self::zero(p.coeff.table(), p.coeff.generators());
        out.add_term(factors, coeff);
        out
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DeltaKey, &SuperPolynomial)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: DeltaKey, coeff: SuperPolynomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            Some(prev) => {
                let sum = &prev + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    /// `p · self`.
    pub fn left_mul(&self, p: &SuperPolynomial) -> Self {
        let mut out = Self::zero(&self.table, self.generators);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), p * c);
        }
        out
    }

    /// `self · w · δ^{(order)}(t_var)` for a homogeneous polynomial `w`.
    pub fn append(&self, var: usize, order: u32, w: &SuperPolynomial) -> Result<Self> {
        let w_odd = match w.parity() {
            Some(p) => p.is_odd(),
            None => return Err(Error::MixedParity),
        };
        let mut out = Self::zero(&self.table, self.generators);
        for (key, c) in &self.terms {
            if key.iter().any(|f| f.var == var) {
                return Err(Error::DuplicateDeltaArgument(
                    self.table.var(var).name.clone(),
                ));
            }
            let pos = key.iter().position(|f| f.var > var).unwrap_or(key.len());
            let mut negate = (key.len() - pos) % 2 == 1;
            if w_odd && key.len() % 2 == 1 {
                negate = !negate;
            }
            let mut new_key = key.clone();
            new_key.insert(pos, DeltaFactor { var, order });
            let coeff = c * w;
            out.add_term(new_key, if negate { -coeff } else { coeff });
        }
        Ok(out)
    }

    /// Applies `t^e·δ^{(k)}(t) → (−1)^e·k!/(k−e)!·δ^{(k−e)}(t)` (zero when
    /// `e > k`) until no delta-bearing variable has a positive power in the
    /// coefficient.
    pub fn normalize(&self) -> Result<Self> {
        let mut out = Self::zero(&self.table, self.generators);
        for (key, c) in &self.terms {
            for (exps, coeff) in c.terms() {
                let mut new_key = key.clone();
                let mut new_exps = exps.clone();
                let mut factor = Rational::one();
                let mut dead = false;
                for f in new_key.iter_mut() {
                    let e = exps[f.var];
                    if e < 0 {
                        return Err(Error::Unsupported(format!(
                            "negative power of delta variable `{}`",
                            self.table.var(f.var).name
                        )));
                    }
                    if e == 0 {
                        continue;
                    }
                    let e = e as u32;
                    if e > f.order {
                        dead = true;
                        break;
                    }
                    let mut r = Rational::from_integer(factorial_ratio(f.order, e));
                    if e % 2 == 1 {
                        r = -r;
                    }
                    factor *= r;
                    f.order -= e;
                    new_exps[f.var] = 0;
                }
                if dead {
                    continue;
                }
                let mono = SuperPolynomial::monomial(&self.table, new_exps, coeff.scale(&factor))?;
                out.add_term(new_key, mono);
            }
        }
        Ok(out)
    }
}

/// `δ^{(k)}(a t) = a^{−(k+1)} δ^{(k)}(t)`: returns `a^{−(k+1)}`.
pub fn scale_factor(order: u32, a: &GrassmannElement) -> Result<GrassmannElement> {
    if !a.is_even() {
        return Err(Error::ParityMismatch("scaling factor must be even".into()));
    }
    a.pow(-(order as i64 + 1))
}

/// Expands `δ^{(k)}(arg)` for `arg = d·t_pivot + ν` as
/// `d^{−(k+1)} Σ_j δ^{(k+j)}(t_pivot)·(ν/d)^j/j!`, keeping `j ≤ bound`.
/// Returns the pairs `(k + j, weight_j)`.
pub fn taylor_delta(
    arg: &SuperPolynomial,
    pivot: usize,
    order: u32,
    bound: u32,
) -> Result<Vec<(u32, SuperPolynomial)>> {
    let table = arg.table();
    let mut unit = vec![0; table.len()];
    unit[pivot] = 1;
    let d = arg.coefficient(&unit);
    if !d.is_even() || d.body().is_zero() {
        return Err(Error::NotInvertible(format!(
            "coefficient of `{}` in a delta argument",
            table.var(pivot).name
        )));
    }
    let d_inv = d.inv()?;
    let lead = SuperPolynomial::monomial(table, unit, d.clone())?;
    let nu = arg - &lead;
    if nu.degrees_in(&[pivot]).iter().any(|&e| e != 0) {
        return Err(Error::Unsupported(format!(
            "delta argument is not linear in `{}`",
            table.var(pivot).name
        )));
    }
    if nu.parity() != Some(Parity::Even) {
        return Err(Error::ParityMismatch("delta argument must be even".into()));
    }
    let step = nu.scale(&d_inv);
    let base = d_inv.pow(order as i64 + 1)?;
    let mut out = Vec::new();
    let mut power = SuperPolynomial::constant(table, base);
    let mut fact = Rational::one();
    for j in 0..=bound {
        if j > 0 {
            power = &power * &step;
            fact *= rat(j as i64);
            if power.is_zero() {
                break;
            }
        }
        out.push((order + j, power.scale_rational(&fact.recip())));
    }
    Ok(out)
}

/// Elementary column operation, read as a substitution of coordinates
/// `ε_A ↦ Σ_B ε_B M^B_A`.
#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    /// `ε_index ↦ ε_index · by`.
    Scale { index: usize, by: GrassmannElement },
    /// `ε_target ↦ ε_target + ε_source · by`.
    Shear {
        target: usize,
        source: usize,
        by: GrassmannElement,
    },
}

/// Factors an even invertible `T` as `M_1 ⋯ M_k` with elementary `M_i` by
/// column reduction (delta block first). Non-invertible pivots are repaired
/// by adding a column of the same block instead of swapping.
pub fn elementary_factors(t: &SuperMatrix<GrassmannElement>) -> Result<Vec<Elementary>> {
    let (n, m) = t.dim();
    let size = n + m;
    let mut w = t.entries().clone();
    let mut ops: Vec<Elementary> = Vec::new();
    let block = |i: usize| i >= n;
    let order: Vec<usize> = (n..size).chain(0..n).collect();
    let mut done = vec![false; size];
    for &r in &order {
        if w[r][r].body().is_zero() {
            let q = (0..size)
                .find(|&q| !done[q] && q != r && block(q) == block(r) && !w[r][q].body().is_zero())
                .ok_or_else(|| Error::NotInvertible("matrix body is singular".into()))?;
            let one = GrassmannElement::one(t.like().generators());
            for row in w.iter_mut() {
                row[r] = &row[r] + &row[q];
            }
            // inverse of col_r += col_q
            ops.push(Elementary::Shear {
                target: r,
                source: q,
                by: -&one,
            });
        }
        let p = w[r][r].clone();
        let p_inv = p.inv()?;
        for row in w.iter_mut() {
            row[r] = &row[r] * &p_inv;
        }
        ops.push(Elementary::Scale { index: r, by: p });
        for q in 0..size {
            if q == r || w[r][q].is_zero() {
                continue;
            }
            let c = w[r][q].clone();
            for row in w.iter_mut() {
                let delta = &row[r] * &c;
                row[q] = &row[q] - &delta;
            }
            ops.push(Elementary::Shear {
                target: q,
                source: r,
                by: c,
            });
        }
        done[r] = true;
    }
    for (i, row) in w.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let ok = if i == j { e.is_one() } else { e.is_zero() };
            if !ok {
                return Err(Error::CrossCheck("column reduction did not reach E".into()));
            }
        }
    }
    // W·E_1⋯E_k = E, so T = E_k⁻¹⋯E_1⁻¹; `ops` already holds the inverses
    // in the order E_1⁻¹, …, E_k⁻¹.
    ops.reverse();
    Ok(ops)
}

/// Coordinates for `θ_1…θ_n · δ(t_1)…δ(t_m)` on an `n|m` space.
pub fn full_product_table(n: usize, m: usize) -> Result<Arc<VariableTable>> {
    let mut vars: Vec<Variable> = (1..=n).map(|a| Variable::odd(format!("theta{a}"))).collect();
    vars.extend((1..=m).map(|mu| Variable::even(format!("t{mu}"))));
    VariableTable::new(vars)
}

/// `θ_1⋯θ_n · δ(t_1)⋯δ(t_m)` over a table built by [`full_product_table`].
pub fn full_product(table: &Arc<VariableTable>, generators: u8) -> Result<DeltaProduct> {
    let (odd, even) = split_vars(table);
    let mut exps = vec![0; table.len()];
    for &i in &odd {
        exps[i] = 1;
    }
    let coeff = SuperPolynomial::monomial(table, exps, GrassmannElement::one(generators))?;
    DeltaProduct::new(
        coeff,
        even.iter().map(|&v| DeltaFactor { var: v, order: 0 }).collect(),
    )
}

fn split_vars(table: &VariableTable) -> (Vec<usize>, Vec<usize>) {
    let odd = (0..table.len())
        .filter(|&i| table.var(i).parity == Parity::Odd)
        .collect();
    let even = (0..table.len())
        .filter(|&i| table.var(i).parity == Parity::Even)
        .collect();
    (odd, even)
}

/// Scalar `c` with `sum = c · θ_1⋯θ_n · δ(t_1)⋯δ(t_m)`.
fn full_product_multiple(sum: &DeltaSum) -> Result<GrassmannElement> {
    let (odd, even) = split_vars(&sum.table);
    let key: DeltaKey = even.iter().map(|&v| DeltaFactor { var: v, order: 0 }).collect();
    let mut exps = vec![0; sum.table.len()];
    for &i in &odd {
        exps[i] = 1;
    }
    if sum.terms.is_empty() {
        return Ok(GrassmannElement::zero(sum.generators));
    }
    if sum.terms.len() != 1 || !sum.terms.contains_key(&key) {
        return Err(Error::NotFullProduct("result has stray delta terms".into()));
    }
    let c = &sum.terms[&key];
    if c.len() != 1 || c.coefficient(&exps).is_zero() {
        return Err(Error::NotFullProduct("result coefficient is not a scalar multiple of the odd monomial".into()));
    }
    Ok(c.coefficient(&exps))
}

/// Applies `ε ↦ ε·M` for one elementary `M` to a delta expression.
fn substitute(sum: &DeltaSum, op: &Elementary, coords: &[usize]) -> Result<DeltaSum> {
    let table = &sum.table;
    let g = sum.generators;
    let var = |a: usize| SuperPolynomial::var_at(table, g, coords[a]);
    let konst = |c: &GrassmannElement| SuperPolynomial::constant(table, c.clone());
    let (changed, image) = match op {
        Elementary::Scale { index, by } => (coords[*index], &var(*index) * &konst(by)),
        Elementary::Shear { target, source, by } => (
            coords[*target],
            &var(*target) + &(&var(*source) * &konst(by)),
        ),
    };
    let mut assign = HashMap::new();
    assign.insert(changed, image.clone());
    let odd_vars = (0..table.len())
        .filter(|&i| table.var(i).parity == Parity::Odd)
        .count() as u32;
    let mut out = DeltaSum::zero(table, g);
    for (key, c) in &sum.terms {
        let mut acc = DeltaSum::zero(table, g);
        acc.add_term(Vec::new(), c.subst(&assign)?);
        let total_order: u32 = key.iter().map(|f| f.order).sum();
        let bound = total_order + odd_vars + g as u32 + 1;
        for f in key {
            if f.var != changed {
                acc = acc.append(f.var, f.order, &SuperPolynomial::one(table, g))?;
                continue;
            }
            // every even variable in the shift must itself carry a delta
            for (exps, _) in image.terms() {
                for (i, &e) in exps.iter().enumerate() {
                    if e != 0
                        && i != changed
                        && table.var(i).parity == Parity::Even
                        && !key.iter().any(|h| h.var == i)
                    {
                        return Err(Error::Unsupported(format!(
                            "shift by `{}`, which carries no delta",
                            table.var(i).name
                        )));
                    }
                }
            }
            let expansion = taylor_delta(&image, changed, f.order, bound)?;
            let mut next = DeltaSum::zero(table, g);
            for (order, w) in expansion {
                next = next.add(&acc.append(f.var, order, &w)?);
            }
            acc = next;
        }
        out = out.add(&acc.normalize()?);
    }
    out.normalize()
}

#[derive(Clone, Debug)]
pub struct LinearSubstResult {
    pub product: DeltaSum,
    pub factor: GrassmannElement,
    pub steps: usize,
}

/// Substitutes `ε ↦ ε·T` into a full product `c·θ_1⋯θ_n·δ(t_1)⋯δ(t_m)`,
/// one elementary factor of `T` at a time, and reads off the scalar factor
/// relative to the original product.
pub fn linear_subst(p: &DeltaProduct, t: &SuperMatrix<GrassmannElement>) -> Result<LinearSubstResult> {
    let table = Arc::clone(p.coeff.table());
    let (odd, even) = split_vars(&table);
    let (n, m) = t.dim();
    if odd.len() != n || even.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{}|{} coordinates for a {n}|{m} matrix",
            odd.len(),
            even.len()
        )));
    }
    let g = p.coeff.generators().max(t.like().generators());
    let coeff = p.coeff.lift_generators(g)?;
    let p = DeltaProduct::new(coeff, p.factors.clone())?;
    let start = DeltaSum::from_product(&p).normalize()?;
    let c0 = full_product_multiple(&start)
        .map_err(|_| Error::NotFullProduct("input is not θ₁⋯θₙ·δ(t₁)⋯δ(tₘ)".into()))?;
    let c0_inv = c0
        .inv()
        .map_err(|_| Error::NotFullProduct("input coefficient is not invertible".into()))?;
    let t = if t.like().generators() == g {
        t.clone()
    } else {
        let lifted = t
            .entries()
            .iter()
            .map(|r| r.iter().map(|e| e.lift(g)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SuperMatrix::new(n, m, lifted, &GrassmannElement::zero(g))?
    };
    let ops = elementary_factors(&t)?;
    let coords: Vec<usize> = odd.iter().chain(&even).copied().collect();
    let mut cur = start;
    // ε ↦ ε·M_1⋯M_k is the composite of the substitutions for M_k, …, M_1
    for op in ops.iter().rev() {
        cur = substitute(&cur, op, &coords)?;
    }
    let c = full_product_multiple(&cur)?;
    let factor = &c0_inv * &c;
    Ok(LinearSubstResult {
        product: cur,
        factor,
        steps: ops.len(),
    })
}

/// The identification `δ(ε.) ↔ Ber(e)`: both sides pick up `Ber T` under
/// `ε ↦ ε·T`. Returns `(delta factor, Ber T)`.
pub fn delta_as_ber_basis(t: &SuperMatrix<GrassmannElement>) -> Result<(GrassmannElement, GrassmannElement)> {
    let (n, m) = t.dim();
    let table = full_product_table(n, m)?;
    let p = full_product(&table, t.like().generators())?;
    let r = linear_subst(&p, t)?;
    Ok((r.factor, t.ber()?))
}

/// Coordinates of an `n|m` space and their duals: `x_a` even, `xi_μ` odd,
/// `xs_a` odd, `xsh_μ` even.
#[derive(Clone, Debug)]
pub struct IntegralFormSpace {
    pub n: usize,
    pub m: usize,
    pub table: Arc<VariableTable>,
    pub generators: u8,
}

impl IntegralFormSpace {
    pub fn new(n: usize, m: usize, generators: u8) -> Result<Self> {
        let mut vars = Vec::new();
        vars.extend((1..=n).map(|a| Variable::even(format!("x{a}"))));
        vars.extend((1..=m).map(|mu| Variable::odd(format!("xi{mu}"))));
        vars.extend((1..=n).map(|a| Variable::odd(format!("xs{a}"))));
        vars.extend((1..=m).map(|mu| Variable::even(format!("xsh{mu}"))));
        Ok(IntegralFormSpace {
            n,
            m,
            table: VariableTable::new(vars)?,
            generators,
        })
    }

    /// Index of coordinate `A` (block order) and of its dual.
    pub fn coordinate(&self, a: usize) -> usize {
        a
    }

    pub fn dual(&self, a: usize) -> usize {
        self.n + self.m + a
    }

    pub fn is_base(&self, i: usize) -> bool {
        i < self.n + self.m
    }

    /// `coeff · D(x) · ∏ xs_a^{α_a} · ∏ xsh_μ^{β_μ}`.
    pub fn monomial(&self, coeff: &SuperPolynomial, alpha: &[u8], beta: &[u32]) -> Result<IntegralForm> {
        if alpha.len() != self.n || beta.len() != self.m {
            return Err(Error::DimensionMismatch("exponent lengths".into()));
        }
        let mut exps = vec![0; self.table.len()];
        for (a, &e) in alpha.iter().enumerate() {
            exps[self.dual(a)] = e as i32;
        }
        for (mu, &e) in beta.iter().enumerate() {
            exps[self.dual(self.n + mu)] = e as i32;
        }
        let dual = SuperPolynomial::monomial(&self.table, exps, GrassmannElement::one(self.generators))?;
        let coeff = coeff.reembed(&self.table)?;
        if coeff
            .terms()
            .any(|(e, _)| e.iter().enumerate().any(|(i, &x)| x != 0 && !self.is_base(i)))
        {
            return Err(Error::InvalidTable("coefficient depends on dual coordinates".into()));
        }
        Ok(IntegralForm {
            poly: &coeff * &dual,
        })
    }
}

/// Integral form `Σ f(x, ξ)·D(x)·(x*)^{(α, β)}`, stored as a polynomial
/// over an [`IntegralFormSpace`] table.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralForm {
    pub poly: SuperPolynomial,
}

impl IntegralForm {
    /// Degrees `n − Σα − Σβ` present in the form.
    pub fn degrees(&self, space: &IntegralFormSpace) -> Vec<i64> {
        let duals: Vec<usize> = (0..space.n + space.m).map(|a| space.dual(a)).collect();
        self.poly
            .degrees_in(&duals)
            .into_iter()
            .map(|d| space.n as i64 - d as i64)
            .collect()
    }
}

/// `dσ = Σ_A (−1)^{Ã} ∂_{x^A} ∂_{x*_A} σ` with left derivatives.
pub fn integral_d(space: &IntegralFormSpace, sigma: &IntegralForm) -> IntegralForm {
    let mut out = SuperPolynomial::zero(&space.table, sigma.poly.generators());
    for a in 0..space.n + space.m {
        let term = sigma
            .poly
            .lderiv_at(space.dual(a))
            .lderiv_at(space.coordinate(a));
        out = if a >= space.n { &out - &term } else { &out + &term };
    }
    IntegralForm { poly: out }
}

/// Pseudoform data dual to `(α, β)`: odd exponents `1 − α`, delta orders `β`.
pub fn pseudoform_of(alpha: &[u8], beta: &[u32]) -> (Vec<u8>, Vec<u32>) {
    (alpha.iter().map(|&a| 1 - a).collect(), beta.to_vec())
}

pub fn integral_form_of(theta: &[u8], orders: &[u32]) -> (Vec<u8>, Vec<u32>) {
    (theta.iter().map(|&a| 1 - a).collect(), orders.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::ratio;

    fn one_var() -> (Arc<VariableTable>, DeltaSum) {
        let table = VariableTable::new(vec![Variable::even("t")]).unwrap();
        let z = DeltaSum::zero(&table, 0);
        (table, z)
    }

    fn rewrite(power: i32, order: u32) -> DeltaSum {
        let (table, _) = one_var();
        let coeff = SuperPolynomial::monomial(&table, vec![power], GrassmannElement::one(0)).unwrap();
        let p = DeltaProduct::new(coeff, vec![DeltaFactor { var: 0, order }]).unwrap();
        DeltaSum::from_product(&p).normalize().unwrap()
    }

    fn delta(order: u32, c: i64) -> DeltaSum {
        let (table, _) = one_var();
        let p = DeltaProduct::new(
            SuperPolynomial::from_rational(&table, 0, rat(c)),
            vec![DeltaFactor { var: 0, order }],
        )
        .unwrap();
        DeltaSum::from_product(&p)
    }

    #[test]
    fn rewrite_rules() {
        assert!(rewrite(1, 0).is_zero());
        assert_eq!(rewrite(1, 1), delta(0, -1));
        assert_eq!(rewrite(2, 2), delta(0, 2));
        let once = rewrite(2, 2);
        assert_eq!(once.normalize().unwrap(), once);
    }

    #[test]
    fn scaling() {
        let a = GrassmannElement::from_int(0, 3);
        assert_eq!(
            scale_factor(0, &a).unwrap(),
            GrassmannElement::scalar(0, ratio(1, 3))
        );
        assert_eq!(
            scale_factor(0, &GrassmannElement::from_int(0, -1)).unwrap(),
            GrassmannElement::from_int(0, -1)
        );
        assert_eq!(
            scale_factor(2, &GrassmannElement::from_int(0, 2)).unwrap(),
            GrassmannElement::scalar(0, ratio(1, 8))
        );
    }

    #[test]
    fn coinciding_arguments_rejected() {
        let (table, _) = one_var();
        let r = DeltaProduct::new(
            SuperPolynomial::one(&table, 0),
            vec![DeltaFactor { var: 0, order: 0 }, DeltaFactor { var: 0, order: 1 }],
        );
        assert!(matches!(r, Err(Error::DuplicateDeltaArgument(_))));
    }

    #[test]
    fn deltas_anticommute() {
        let table = VariableTable::new(vec![Variable::even("s"), Variable::even("t")]).unwrap();
        let one = SuperPolynomial::one(&table, 0);
        let st = DeltaProduct::new(
            one.clone(),
            vec![DeltaFactor { var: 0, order: 0 }, DeltaFactor { var: 1, order: 0 }],
        )
        .unwrap();
        let ts = DeltaProduct::new(
            one,
            vec![DeltaFactor { var: 1, order: 0 }, DeltaFactor { var: 0, order: 0 }],
        )
        .unwrap();
        assert!(DeltaSum::from_product(&st).add(&DeltaSum::from_product(&ts)).is_zero());
    }

    #[test]
    fn identity_and_diagonal_substitutions() {
        let z = GrassmannElement::zero(0);
        let id = SuperMatrix::identity(1, 2, &z);
        let (f, b) = delta_as_ber_basis(&id).unwrap();
        assert!(f.is_one() && b.is_one());
        let ge = |v: i64| GrassmannElement::from_int(0, v);
        let d = SuperMatrix::diagonal(&[], &[ge(2), ge(5)], &z).unwrap();
        let (f, _) = delta_as_ber_basis(&d).unwrap();
        assert_eq!(f, GrassmannElement::scalar(0, ratio(1, 10)));
        let d = SuperMatrix::diagonal(&[ge(3)], &[ge(4)], &z).unwrap();
        let (f, b) = delta_as_ber_basis(&d).unwrap();
        assert_eq!(f, b);
    }

    #[test]
    fn one_one_with_odd_entries() {
        let g = 2;
        let z = GrassmannElement::zero(g);
        let one = GrassmannElement::one(g);
        let b = GrassmannElement::generator(g, 1).unwrap();
        let c = GrassmannElement::generator(g, 2).unwrap();
        let t = SuperMatrix::new(1, 1, vec![vec![one.clone(), b], vec![c, one]], &z).unwrap();
        let (f, ber) = delta_as_ber_basis(&t).unwrap();
        assert_eq!(f, ber);
    }

    #[test]
    fn d_of_top_degree_and_single_dual() {
        let space = IntegralFormSpace::new(1, 1, 0).unwrap();
        let x = SuperPolynomial::var(&space.table, 0, "x1").unwrap();
        let f = &x * &x;
        let s = space.monomial(&f, &[0], &[0]).unwrap();
        assert!(integral_d(&space, &s).poly.is_zero());
        let s = space.monomial(&f, &[1], &[0]).unwrap();
        let want = space.monomial(&x.scale_rational(&rat(2)), &[0], &[0]).unwrap();
        assert_eq!(integral_d(&space, &s), want);
        let s = space.monomial(&f, &[1], &[2]).unwrap();
        assert!(integral_d(&space, &integral_d(&space, &s)).poly.is_zero());
    }

    #[test]
    fn dictionary_round_trip() {
        let (th, ord) = pseudoform_of(&[1, 0, 1], &[0, 3]);
        assert_eq!(th, vec![0, 1, 0]);
        assert_eq!(integral_form_of(&th, &ord), (vec![1, 0, 1], vec![0, 3]));
    }
}
