//! Laurent polynomials in formal variables of declared parity, with
//! Grassmann-algebra coefficients.
//!
//! A term `c · v₁^e₁ ⋯ v_k^e_k` is stored with the coefficient leftmost and
//! the variables in table order. Odd variables carry exponent 0 or 1; even
//! variables flagged `laurent` may carry negative exponents.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{format_rational, rat, GrassmannElement, Parity, Rational};
use crate::scalar::{Ring, SuperScalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub parity: Parity,
    pub laurent: bool,
}

impl Variable {
    pub fn even(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            parity: Parity::Even,
            laurent: false,
        }
    }

    pub fn laurent(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            parity: Parity::Even,
            laurent: true,
        }
    }

    pub fn odd(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            parity: Parity::Odd,
            laurent: false,
        }
    }

    pub fn with_parity(name: impl Into<String>, parity: Parity, laurent: bool) -> Self {
        Variable {
            name: name.into(),
            parity,
            laurent: laurent && parity == Parity::Even,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VariableTable {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
}

impl PartialEq for VariableTable {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VariableTable {}

impl VariableTable {
    pub fn new(vars: Vec<Variable>) -> Result<Arc<Self>> {
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.laurent && v.parity == Parity::Odd {
                return Err(Error::InvalidTable(format!(
                    "odd variable `{}` cannot be Laurent",
                    v.name
                )));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidTable(format!("duplicate name `{}`", v.name)));
            }
        }
        Ok(Arc::new(VariableTable { vars, index }))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    fn is_odd(&self, i: usize) -> bool {
        self.vars[i].parity == Parity::Odd
    }
}

pub type Exponents = Vec<i32>;

#[derive(Clone)]
pub struct SuperPolynomial {
    table: Arc<VariableTable>,
    generators: u8,
    terms: BTreeMap<Exponents, GrassmannElement>,
}

impl PartialEq for SuperPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
            && self.terms == other.terms
    }
}

impl Eq for SuperPolynomial {}

/// Parity of a monomial: number of odd variables present, mod 2.
fn monomial_parity(table: &VariableTable, exps: &[i32]) -> Parity {
    let count = exps
        .iter()
        .enumerate()
        .filter(|(i, e)| **e != 0 && table.is_odd(*i))
        .count();
    Parity::from_bit(count)
}

/// Sign and validity of the concatenation `M₁·M₂` of two monomials.
/// Returns `None` when an odd variable appears twice.
fn merge_monomials(table: &VariableTable, a: &[i32], b: &[i32]) -> Option<(Exponents, bool)> {
    let mut exps = Vec::with_capacity(a.len());
    let mut negate = false;
    let mut odd_in_a_after = 0usize;
    // count pairs (i in a, j in b, i > j, both odd)
    for i in (0..a.len()).rev() {
        if table.is_odd(i) {
            if a[i] != 0 && b[i] != 0 {
                return None;
            }
            if b[i] != 0 && odd_in_a_after % 2 == 1 {
                negate = !negate;
            }
            if a[i] != 0 {
                odd_in_a_after += 1;
            }
        }
    }
    for i in 0..a.len() {
        exps.push(a[i] + b[i]);
    }
    Some((exps, negate))
}

impl SuperPolynomial {
    pub fn zero(table: &Arc<VariableTable>, generators: u8) -> Self {
        SuperPolynomial {
            table: Arc::clone(table),
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VariableTable>, value: GrassmannElement) -> Self {
        let mut p = Self::zero(table, value.generators());
        if !value.is_zero() {
            p.terms.insert(vec![0; table.len()], value);
        }
        p
    }

    pub fn from_rational(table: &Arc<VariableTable>, generators: u8, value: Rational) -> Self {
        Self::constant(table, GrassmannElement::scalar(generators, value))
    }

    pub fn one(table: &Arc<VariableTable>, generators: u8) -> Self {
        Self::from_rational(table, generators, Rational::one())
    }

    pub fn var(table: &Arc<VariableTable>, generators: u8, name: &str) -> Result<Self> {
        let i = table.position(name)?;
        Ok(Self::var_at(table, generators, i))
    }

    pub fn var_at(table: &Arc<VariableTable>, generators: u8, i: usize) -> Self {
        let mut exps = vec![0; table.len()];
        exps[i] = 1;
        let mut p = Self::zero(table, generators);
        p.terms.insert(exps, GrassmannElement::one(generators));
        p
    }

    /// A single term `coeff · ∏ v_i^{e_i}`.
    pub fn monomial(
        table: &Arc<VariableTable>,
        exps: Exponents,
        coeff: GrassmannElement,
    ) -> Result<Self> {
        if exps.len() != table.len() {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} for {} variables",
                exps.len(),
                table.len()
            )));
        }
        for (i, &e) in exps.iter().enumerate() {
            let v = table.var(i);
            if v.parity == Parity::Odd && !(0..=1).contains(&e) {
                if e > 1 {
                    return Ok(Self::zero(table, coeff.generators()));
                }
                return Err(Error::NegativeExponent(v.name.clone()));
            }
            if e < 0 && !v.laurent {
                return Err(Error::NegativeExponent(v.name.clone()));
            }
        }
        let mut p = Self::zero(table, coeff.generators());
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        Ok(p)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn generators(&self) -> u8 {
        self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GrassmannElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i32]) -> GrassmannElement {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| GrassmannElement::zero(self.generators))
    }

    /// Constant term if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<GrassmannElement> {
        match self.terms.len() {
            0 => Some(GrassmannElement::zero(self.generators)),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|x| *x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, exps: Exponents, coeff: GrassmannElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                let sum = &*slot + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !(Arc::ptr_eq(&self.table, &other.table) || self.table == other.table) {
            return Err(Error::TableMismatch);
        }
        if self.generators != other.generators {
            return Err(Error::GeneratorMismatch {
                left: self.generators,
                right: other.generators,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.table, self.generators);
        let split: Vec<_> = other
            .terms
            .iter()
            .map(|(e, c)| (e, c.parity_split()))
            .collect();
        for (ea, ca) in &self.terms {
            let pa = monomial_parity(&self.table, ea);
            for (eb, (cb_even, cb_odd)) in &split {
                let Some((exps, negate)) = merge_monomials(&self.table, ea, eb) else {
                    continue;
                };
                // move cb past the monomial of the left factor
                let moved = if pa.is_odd() {
                    cb_even - cb_odd
                } else {
                    cb_even + cb_odd
                };
                let c = ca * &moved;
                let c = if negate { -c } else { c };
                out.add_term(exps, c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &GrassmannElement) -> Self {
        Self::constant(&self.table, factor.clone()) * self.clone()
    }

    pub fn scale_rational(&self, factor: &Rational) -> Self {
        let mut out = Self::zero(&self.table, self.generators);
        if factor.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.scale(factor));
        }
        out
    }

    /// Parity of a homogeneous polynomial (zero is even).
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for (e, c) in &self.terms {
            let mp = monomial_parity(&self.table, e);
            for (mask, _) in c.terms() {
                let p = mp + Parity::from_bit(mask.count_ones() as usize);
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    /// Left partial derivative.
    pub fn lderiv(&self, name: &str) -> Result<Self> {
        let v = self.table.position(name)?;
        Ok(self.lderiv_at(v))
    }

    pub fn lderiv_at(&self, v: usize) -> Self {
        let mut out = Self::zero(&self.table, self.generators);
        let odd_v = self.table.is_odd(v);
        for (e, c) in &self.terms {
            let ev = e[v];
            if ev == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[v] = ev - 1;
            if odd_v {
                let before = (0..v)
                    .filter(|&i| e[i] != 0 && self.table.is_odd(i))
                    .count();
                let (ce, co) = c.parity_split();
                let mut coeff = &ce - &co;
                if before % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(exps, coeff);
            } else {
                out.add_term(exps, c.scale(&rat(ev as i64)));
            }
        }
        out
    }

    /// Sum of exponents over the listed variables, for every term.
    pub fn degrees_in(&self, vars: &[usize]) -> Vec<i32> {
        let mut out: Vec<i32> = self
            .terms
            .keys()
            .map(|e| vars.iter().map(|&i| e[i]).sum())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Keeps only the terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&[i32]) -> bool) -> Self {
        let mut out = Self::zero(&self.table, self.generators);
        for (e, c) in &self.terms {
            if keep(e) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Embeds the polynomial into an algebra with more generators.
    pub fn lift_generators(&self, generators: u8) -> Result<Self> {
        let mut out = Self::zero(&self.table, generators);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.lift(generators)?);
        }
        Ok(out)
    }

    /// Inverse of an even polynomial of the form `lead · (1 + nilpotent)`,
    /// where `lead` is a rational multiple of a monomial in even variables.
    pub fn inverse(&self) -> Result<Self> {
        let mut lead: Option<(&Exponents, Rational)> = None;
        for (e, c) in &self.terms {
            let even_only = e
                .iter()
                .enumerate()
                .all(|(i, x)| *x == 0 || !self.table.is_odd(i));
            let body = c.body();
            if even_only && !body.is_zero() {
                if lead.is_some() {
                    return Err(Error::NotInvertible(format!(
                        "no unique leading term in {self}"
                    )));
                }
                lead = Some((e, body));
            }
        }
        let (lead_exps, lead_body) =
            lead.ok_or_else(|| Error::NotInvertible(format!("no invertible term in {self}")))?;
        let inv_exps: Exponents = lead_exps.iter().map(|x| -x).collect();
        let lead_inv = Self::monomial(
            &self.table,
            inv_exps,
            GrassmannElement::scalar(self.generators, lead_body.recip()),
        )
        .map_err(|_| Error::NotInvertible(format!("leading monomial of {self} is not a unit")))?;
        let one = Self::one(&self.table, self.generators);
        let rest = &(self * &lead_inv) - &one;
        let step = -&rest;
        let odd_vars = (0..self.table.len()).filter(|&i| self.table.is_odd(i)).count();
        let bound = odd_vars + self.generators as usize + 2;
        let mut sum = one.clone();
        let mut power = one;
        for _ in 0..bound {
            power = &power * &step;
            if power.is_zero() {
                return Ok(&sum * &lead_inv);
            }
            sum = &sum + &power;
        }
        Err(Error::NotInvertible(format!(
            "remainder of {self} is not nilpotent"
        )))
    }

    pub fn pow(&self, exponent: i32) -> Result<Self> {
        let base = if exponent < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut acc = Self::one(&self.table, self.generators);
        for _ in 0..exponent.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Simultaneous substitution within the same table.
    pub fn subst(&self, assignments: &HashMap<usize, SuperPolynomial>) -> Result<Self> {
        let table = Arc::clone(&self.table);
        self.subst_into(&table, assignments)
    }

    /// Substitution by variable name within the same table.
    pub fn subst_named(&self, assignments: &[(&str, SuperPolynomial)]) -> Result<Self> {
        let mut map = HashMap::new();
        for (name, value) in assignments {
            map.insert(self.table.position(name)?, value.clone());
        }
        self.subst(&map)
    }

    /// Simultaneous substitution into a polynomial over `target`. Variables
    /// without an assignment are carried over by name.
    pub fn subst_into(
        &self,
        target: &Arc<VariableTable>,
        assignments: &HashMap<usize, SuperPolynomial>,
    ) -> Result<Self> {
        let mut images: Vec<SuperPolynomial> = Vec::with_capacity(self.table.len());
        for (i, v) in self.table.vars().iter().enumerate() {
            match assignments.get(&i) {
                Some(value) => {
                    if !(Arc::ptr_eq(value.table(), target) || **value.table() == **target) {
                        return Err(Error::TableMismatch);
                    }
                    match value.parity() {
                        Some(p) if p == v.parity || value.is_zero() => {}
                        _ => {
                            return Err(Error::ParityMismatch(format!(
                                "value for `{}` has the wrong parity",
                                v.name
                            )))
                        }
                    }
                    images.push(value.lift_to(self.generators.max(value.generators))?);
                }
                None => {
                    let j = target.position(&v.name)?;
                    let tv = target.var(j);
                    if tv.parity != v.parity {
                        return Err(Error::ParityMismatch(v.name.clone()));
                    }
                    images.push(Self::var_at(target, self.generators, j));
                }
            }
        }
        let generators = images
            .iter()
            .map(|p| p.generators)
            .max()
            .unwrap_or(self.generators)
            .max(self.generators);
        let images: Vec<SuperPolynomial> = images
            .into_iter()
            .map(|p| p.lift_to(generators))
            .collect::<Result<_>>()?;
        let mut cache: HashMap<(usize, i32), SuperPolynomial> = HashMap::new();
        let mut out = Self::zero(target, generators);
        for (e, c) in &self.terms {
            let mut acc = Self::constant(target, c.lift(generators)?);
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let factor = match cache.get(&(i, ei)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = images[i].pow(ei)?;
                        cache.insert((i, ei), f.clone());
                        f
                    }
                };
                acc = &acc * &factor;
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    fn lift_to(&self, generators: u8) -> Result<Self> {
        if generators == self.generators {
            Ok(self.clone())
        } else {
            self.lift_generators(generators)
        }
    }

    /// Same polynomial over a larger table containing every variable by name.
    pub fn reembed(&self, target: &Arc<VariableTable>) -> Result<Self> {
        let map: Vec<usize> = self
            .table
            .vars()
            .iter()
            .map(|v| target.position(&v.name))
            .collect::<Result<_>>()?;
        for (i, v) in self.table.vars().iter().enumerate() {
            let t = target.var(map[i]);
            if t.parity != v.parity || (v.laurent && !t.laurent) {
                return Err(Error::InvalidTable(format!(
                    "`{}` changes type when re-embedded",
                    v.name
                )));
            }
        }
        // reordering odd variables changes signs, so go through products
        let mut out = Self::zero(target, self.generators);
        for (e, c) in &self.terms {
            let mut acc = Self::constant(target, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let mut exps = vec![0; target.len()];
                exps[map[i]] = ei;
                let m = Self::monomial(target, exps, GrassmannElement::one(self.generators))?;
                acc = &acc * &m;
            }
            out = &out + &acc;
        }
        Ok(out)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(i, x)| {
                    let name = &self.table.var(i).name;
                    if *x == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            let coeff = match c.as_rational() {
                Some(r) => format_rational(&r),
                None => format!("({c})"),
            };
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", mono.join("·"))?;
            } else {
                write!(f, "{coeff}·{}", mono.join("·"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;

    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;

    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;

    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;

    fn neg(self) -> SuperPolynomial {
        self.scale_rational(&-Rational::one())
    }
}

impl Add for SuperPolynomial {
    type Output = SuperPolynomial;

    fn add(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self + &rhs
    }
}

impl Sub for SuperPolynomial {
    type Output = SuperPolynomial;

    fn sub(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self - &rhs
    }
}

impl Mul for SuperPolynomial {
    type Output = SuperPolynomial;

    fn mul(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self * &rhs
    }
}

impl Neg for SuperPolynomial {
    type Output = SuperPolynomial;

    fn neg(self) -> SuperPolynomial {
        -&self
    }
}

impl Ring for SuperPolynomial {
    fn zero_like(&self) -> Self {
        Self::zero(&self.table, self.generators)
    }

    fn one_like(&self) -> Self {
        Self::one(&self.table, self.generators)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn r_add(&self, other: &Self) -> Self {
        self + other
    }

    fn r_sub(&self, other: &Self) -> Self {
        self - other
    }

    fn r_mul(&self, other: &Self) -> Self {
        self * other
    }

    fn r_neg(&self) -> Self {
        -self
    }

    fn from_i64_like(&self, value: i64) -> Self {
        Self::from_rational(&self.table, self.generators, rat(value))
    }
}

impl SuperScalar for SuperPolynomial {
    fn parity(&self) -> Option<Parity> {
        SuperPolynomial::parity(self)
    }

    fn try_inv(&self) -> Result<Self> {
        self.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VariableTable> {
        VariableTable::new(vec![
            Variable::laurent("u"),
            Variable::even("x"),
            Variable::odd("xi"),
            Variable::odd("eta"),
        ])
        .unwrap()
    }

    fn v(t: &Arc<VariableTable>, name: &str) -> SuperPolynomial {
        SuperPolynomial::var(t, 0, name).unwrap()
    }

    #[test]
    fn laurent_unit() {
        let t = table();
        let u = v(&t, "u");
        let ui = u.pow(-1).unwrap();
        assert_eq!(&u * &ui, SuperPolynomial::one(&t, 0));
    }

    #[test]
    fn odd_sign_rule() {
        let t = table();
        let (xi, eta) = (v(&t, "xi"), v(&t, "eta"));
        let a = &xi * &eta;
        let b = &eta * &xi;
        assert_eq!(b, -&a);
        assert!((&xi * &xi).is_zero());
    }

    #[test]
    fn difference_of_squares_with_nilpotent() {
        let t = table();
        let x = v(&t, "x");
        let xe = &v(&t, "xi") * &v(&t, "eta");
        let p = &(&x + &xe) * &(&x - &xe);
        assert_eq!(p, &x * &x);
    }

    #[test]
    fn derivatives() {
        let t = table();
        let u = v(&t, "u");
        let u3 = u.pow(3).unwrap();
        assert_eq!(
            u3.lderiv("u").unwrap(),
            u.pow(2).unwrap().scale_rational(&rat(3))
        );
        let (xi, eta) = (v(&t, "xi"), v(&t, "eta"));
        let xe = &xi * &eta;
        assert_eq!(xe.lderiv("xi").unwrap(), eta);
        assert_eq!(xe.lderiv("eta").unwrap(), -&xi);
        let ui = u.pow(-1).unwrap();
        assert_eq!(ui.lderiv("u").unwrap(), -&u.pow(-2).unwrap());
        assert!(matches!(xe.lderiv("w"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn odd_coefficient_passes_odd_variable() {
        let t = table();
        let th = GrassmannElement::generator(1, 1).unwrap();
        let xi = SuperPolynomial::var(&t, 1, "xi").unwrap();
        let c = SuperPolynomial::constant(&t, th);
        let p = &xi * &c;
        assert_eq!(p, -&(&c * &xi));
        // ∂_xi (θ·xi) = -θ
        assert_eq!((&c * &xi).lderiv("xi").unwrap(), -&c);
    }

    #[test]
    fn substitutions() {
        let t = table();
        let u = v(&t, "u");
        let u2 = &u * &u;
        let mut m = HashMap::new();
        m.insert(0, u.scale_rational(&rat(2)));
        assert_eq!(u2.subst(&m).unwrap(), u2.scale_rational(&rat(4)));

        let eta = v(&t, "eta");
        let mut m = HashMap::new();
        m.insert(2, eta.scale_rational(&rat(5)));
        assert_eq!(v(&t, "xi").subst(&m).unwrap(), eta.scale_rational(&rat(5)));

        let xe = &v(&t, "xi") * &eta;
        let one = SuperPolynomial::one(&t, 0);
        let mut m = HashMap::new();
        m.insert(0, &u * &(&one + &xe));
        let got = u.pow(-1).unwrap().subst(&m).unwrap();
        assert_eq!(got, &u.pow(-1).unwrap() * &(&one - &xe));
    }

    #[test]
    fn parity_mismatch_rejected() {
        let t = table();
        let mut m = HashMap::new();
        m.insert(2, v(&t, "x"));
        assert!(matches!(
            v(&t, "xi").subst(&m),
            Err(Error::ParityMismatch(_))
        ));
    }

    #[test]
    fn non_invertible_substitution() {
        let t = table();
        let mut m = HashMap::new();
        m.insert(0, &v(&t, "u") + &v(&t, "x"));
        assert!(matches!(
            v(&t, "u").pow(-1).unwrap().subst(&m),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn reembed_reorders_with_signs() {
        let t = table();
        let t2 = VariableTable::new(vec![
            Variable::odd("eta"),
            Variable::odd("xi"),
            Variable::laurent("u"),
            Variable::even("x"),
        ])
        .unwrap();
        let xe = &v(&t, "xi") * &v(&t, "eta");
        let r = xe.reembed(&t2).unwrap();
        let want = &SuperPolynomial::var(&t2, 0, "xi").unwrap()
            * &SuperPolynomial::var(&t2, 0, "eta").unwrap();
        assert_eq!(r, want);
    }
}
