//! Finite Grassmann algebra over the rationals.
//!
//! An element is a sparse map from generator subsets (bitmasks, bit `i` is
//! generator `θ_{i+1}`) to nonzero rational coefficients. The product is the
//! usual supercommutative one: `θ_i θ_j = -θ_j θ_i`, `θ_i² = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Hard upper bound on the number of generators.
pub const MAX_GENERATORS: usize = 16;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"p/q"` or a decimal-free integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator `{s}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: usize) -> Self {
        if bit % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^{|a||b|}` as a boolean "negate".
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

/// Sign of bringing the concatenation `a · b` of two canonical monomials into
/// canonical order. Returns `true` when the sign is negative.
pub(crate) fn merge_sign(a: u32, b: u32) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    count % 2 == 1
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrassmannElement {
    generators: u8,
    terms: BTreeMap<u32, Rational>,
}

impl GrassmannElement {
    pub fn zero(generators: u8) -> Self {
        assert!(
            generators as usize <= MAX_GENERATORS,
            "at most {MAX_GENERATORS} generators"
        );
        GrassmannElement {
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(generators: u8) -> Self {
        Self::scalar(generators, Rational::one())
    }

    pub fn scalar(generators: u8, value: Rational) -> Self {
        let mut e = Self::zero(generators);
        if !value.is_zero() {
            e.terms.insert(0, value);
        }
        e
    }

    pub fn from_int(generators: u8, value: i64) -> Self {
        Self::scalar(generators, rat(value))
    }

    /// The generator `θ_index` (1-based).
    pub fn generator(generators: u8, index: usize) -> Result<Self> {
        if index == 0 || index > generators as usize {
            return Err(Error::GeneratorOutOfRange { index, generators });
        }
        let mut e = Self::zero(generators);
        e.terms.insert(1 << (index - 1), Rational::one());
        Ok(e)
    }

    /// Builds an element from `(1-based generator indices, coefficient)` pairs.
    /// Indices need not be sorted; repeated indices annihilate the term.
    pub fn from_terms<I>(generators: u8, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        if generators as usize > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(generators as usize, MAX_GENERATORS));
        }
        let mut out = Self::zero(generators);
        for (gens, coeff) in terms {
            let mut mask = 0u32;
            let mut negate = false;
            let mut dead = false;
            for &g in &gens {
                if g == 0 || g > generators as usize {
                    return Err(Error::GeneratorOutOfRange {
                        index: g,
                        generators,
                    });
                }
                let bit = 1u32 << (g - 1);
                if mask & bit != 0 {
                    dead = true;
                    break;
                }
                negate ^= merge_sign(mask, bit);
                mask |= bit;
            }
            if dead {
                continue;
            }
            let c = if negate { -coeff } else { coeff };
            out.add_term(mask, c);
        }
        Ok(out)
    }

    pub fn generators(&self) -> u8 {
        self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u32) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, mask: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.generators != other.generators {
            return Err(Error::GeneratorMismatch {
                left: self.generators,
                right: other.generators,
            });
        }
        Ok(())
    }

    /// Embeds the element into an algebra with more generators.
    pub fn lift(&self, generators: u8) -> Result<Self> {
        if generators < self.generators || generators as usize > MAX_GENERATORS {
            return Err(Error::GeneratorMismatch {
                left: self.generators,
                right: generators,
            });
        }
        Ok(GrassmannElement {
            generators,
            terms: self.terms.clone(),
        })
    }

    /// The rational value of an element with no soul.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Degree-0 coefficient.
    pub fn body(&self) -> Rational {
        self.coefficient(0)
    }

    pub fn soul(&self) -> Self {
        let mut s = self.clone();
        s.terms.remove(&0);
        s
    }

    /// `(even part, odd part)` by subset cardinality.
    pub fn parity_split(&self) -> (Self, Self) {
        let mut even = Self::zero(self.generators);
        let mut odd = Self::zero(self.generators);
        for (&m, c) in &self.terms {
            if m.count_ones() % 2 == 0 {
                even.terms.insert(m, c.clone());
            } else {
                odd.terms.insert(m, c.clone());
            }
        }
        (even, odd)
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for &m in self.terms.keys() {
            let p = Parity::from_bit(m.count_ones() as usize);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    pub fn homogeneous_parity(&self) -> Result<Parity> {
        self.parity().ok_or(Error::MixedParity)
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(Parity::Even)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.generators);
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca * cb;
                let c = if merge_sign(ma, mb) { -c } else { c };
                out.add_term(ma | mb, c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.generators);
        }
        GrassmannElement {
            generators: self.generators,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    /// Inverse of an element with nonzero body, as
    /// `body⁻¹ · Σ_k (-soul/body)^k`; the series terminates by nilpotency.
    pub fn inv(&self) -> Result<Self> {
        let body = self.body();
        if body.is_zero() {
            return Err(Error::NotInvertible(format!("zero body in {self}")));
        }
        let body_inv = body.recip();
        let step = self.soul().scale(&-body_inv.clone());
        let mut sum = Self::one(self.generators);
        let mut power = Self::one(self.generators);
        loop {
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&body_inv))
    }

    /// Integer power; negative exponents require an invertible element.
    pub fn pow(&self, exponent: i64) -> Result<Self> {
        let base = if exponent < 0 { self.inv()? } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = Self::one(self.generators);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Largest absolute value over all coefficients, as `f64`.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Sorted 1-based generator indices of a mask.
    pub fn mask_indices(mask: u32) -> Vec<usize> {
        (0..32)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| i + 1)
            .collect()
    }
}

impl fmt::Debug for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let gens: String = Self::mask_indices(mask)
                .iter()
                .map(|i| format!("θ{i}"))
                .collect();
            if mask == 0 {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{gens}")?;
            } else {
                write!(f, "{}{gens}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

// Operator impls panic on generator mismatch; use the `checked_*` methods
// when the operands come from different sources.
impl Add for &GrassmannElement {
    type Output = GrassmannElement;

    fn add(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_add(rhs).expect("generator count mismatch")
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;

    fn sub(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_sub(rhs).expect("generator count mismatch")
    }
}

impl Mul for &GrassmannElement {
    type Output = GrassmannElement;

    fn mul(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_mul(rhs).expect("generator count mismatch")
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;

    fn neg(self) -> GrassmannElement {
        self.scale(&-Rational::one())
    }
}

impl Add for GrassmannElement {
    type Output = GrassmannElement;

    fn add(self, rhs: GrassmannElement) -> GrassmannElement {
        &self + &rhs
    }
}

impl Sub for GrassmannElement {
    type Output = GrassmannElement;

    fn sub(self, rhs: GrassmannElement) -> GrassmannElement {
        &self - &rhs
    }
}

impl Mul for GrassmannElement {
    type Output = GrassmannElement;

    fn mul(self, rhs: GrassmannElement) -> GrassmannElement {
        &self * &rhs
    }
}

impl Neg for GrassmannElement {
    type Output = GrassmannElement;

    fn neg(self) -> GrassmannElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(g: u8, i: usize) -> GrassmannElement {
        GrassmannElement::generator(g, i).unwrap()
    }

    #[test]
    fn generator_products() {
        let (t1, t2) = (th(2, 1), th(2, 2));
        let t12 = &t1 * &t2;
        assert_eq!(
            t12,
            GrassmannElement::from_terms(2, [(vec![1, 2], rat(1))]).unwrap()
        );
        assert_eq!(&t2 * &t1, -&t12);
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn one_plus_nilpotent_times_one_minus() {
        let t12 = GrassmannElement::from_terms(2, [(vec![1, 2], rat(1))]).unwrap();
        let one = GrassmannElement::one(2);
        let a = &one + &t12;
        let b = &one - &t12;
        assert!((&a * &b).is_one());
    }

    #[test]
    fn inverses() {
        assert!(GrassmannElement::one(3).inv().unwrap().is_one());
        assert_eq!(
            GrassmannElement::from_int(0, 2).inv().unwrap(),
            GrassmannElement::scalar(0, ratio(1, 2))
        );
        let t12 = GrassmannElement::from_terms(2, [(vec![1, 2], rat(1))]).unwrap();
        let a = &GrassmannElement::one(2) + &t12;
        assert_eq!(a.inv().unwrap(), &GrassmannElement::one(2) - &t12);
        assert!(matches!(t12.inv(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn body_and_split() {
        let a = GrassmannElement::from_terms(2, [(vec![], rat(3)), (vec![1, 2], rat(1))]).unwrap();
        assert_eq!(a.body(), rat(3));
        assert_eq!(th(1, 1).body(), rat(0));
        let b = GrassmannElement::from_terms(4, [(vec![], ratio(-1, 2)), (vec![1, 2, 3, 4], rat(5))])
            .unwrap();
        assert_eq!(b.body(), ratio(-1, 2));

        let c = &th(2, 1) + &(&th(2, 1) * &th(2, 2));
        let (e, o) = c.parity_split();
        assert_eq!(e, &th(2, 1) * &th(2, 2));
        assert_eq!(o, th(2, 1));
        let (e, o) = GrassmannElement::from_int(0, 7).parity_split();
        assert_eq!(e, GrassmannElement::from_int(0, 7));
        assert!(o.is_zero());
        let d = GrassmannElement::from_terms(
            3,
            [(vec![1], rat(1)), (vec![2], rat(1)), (vec![1, 2, 3], rat(1))],
        )
        .unwrap();
        let (e, o) = d.parity_split();
        assert!(e.is_zero());
        assert_eq!(o, d);
        assert_eq!(d.parity(), Some(Parity::Odd));
        assert_eq!(c.parity(), None);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = GrassmannElement::one(2);
        let b = GrassmannElement::one(3);
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::GeneratorMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn unsorted_terms_pick_up_sign() {
        let a = GrassmannElement::from_terms(3, [(vec![3, 1], rat(1))]).unwrap();
        let b = GrassmannElement::from_terms(3, [(vec![1, 3], rat(-1))]).unwrap();
        assert_eq!(a, b);
        let z = GrassmannElement::from_terms(3, [(vec![2, 2], rat(1))]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&ratio(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(5)), "5");
    }

    #[test]
    fn negative_powers() {
        let a = GrassmannElement::from_terms(2, [(vec![], rat(2)), (vec![1, 2], rat(1))]).unwrap();
        let p = a.pow(-3).unwrap();
        assert!((&p * &a.pow(3).unwrap()).is_one());
    }
}
