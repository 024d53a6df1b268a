//! Univariate polynomials in a commuting variable `z` with Grassmann
//! coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Rational};
use crate::scalar::Ring;

#[derive(Clone, PartialEq, Eq)]
pub struct PolyZ {
    generators: u8,
    /// `coeffs[k]` is the coefficient of `z^k`; no trailing zeros.
    coeffs: Vec<GrassmannElement>,
}

impl PolyZ {
    pub fn zero(generators: u8) -> Self {
        PolyZ {
            generators,
            coeffs: Vec::new(),
        }
    }

    pub fn one(generators: u8) -> Self {
        Self::constant(GrassmannElement::one(generators))
    }

    pub fn constant(c: GrassmannElement) -> Self {
        Self::from_coeffs(c.generators(), vec![c])
    }

    /// `z`.
    pub fn z(generators: u8) -> Self {
        Self::from_coeffs(
            generators,
            vec![GrassmannElement::zero(generators), GrassmannElement::one(generators)],
        )
    }

    /// `1 + c·z`.
    pub fn one_plus(c: &GrassmannElement) -> Self {
        Self::from_coeffs(c.generators(), vec![GrassmannElement::one(c.generators()), c.clone()])
    }

    pub fn from_coeffs(generators: u8, coeffs: Vec<GrassmannElement>) -> Self {
        let mut p = PolyZ { generators, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn generators(&self) -> u8 {
        self.generators
    }

    pub fn coeffs(&self) -> &[GrassmannElement] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero outside the support).
    pub fn coeff(&self, k: i64) -> GrassmannElement {
        if k < 0 {
            return GrassmannElement::zero(self.generators);
        }
        self.coeffs
            .get(k as usize)
            .cloned()
            .unwrap_or_else(|| GrassmannElement::zero(self.generators))
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n as i64)
            .map(|k| &self.coeff(k) + &other.coeff(k))
            .collect();
        Self::from_coeffs(self.generators, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n as i64)
            .map(|k| &self.coeff(k) - &other.coeff(k))
            .collect();
        Self::from_coeffs(self.generators, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.generators);
        }
        let mut out =
            vec![GrassmannElement::zero(self.generators); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(self.generators, out)
    }

    pub fn scale(&self, c: &GrassmannElement) -> Self {
        Self::from_coeffs(self.generators, self.coeffs.iter().map(|a| c * a).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.generators, self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.generators);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation at a Grassmann value of `z`.
    pub fn eval(&self, z: &GrassmannElement) -> GrassmannElement {
        let mut acc = GrassmannElement::zero(self.generators);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn eval_rational(&self, z: &Rational) -> GrassmannElement {
        self.eval(&GrassmannElement::scalar(self.generators, z.clone()))
    }

    /// Euclidean division by a divisor with even, invertible leading
    /// coefficient. Both polynomials must have even coefficients.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor
            .degree()
            .ok_or_else(|| Error::NotInvertible("division by the zero polynomial".into()))?;
        let lead_inv = divisor.coeffs[d].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GrassmannElement::zero(self.generators); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1;
            let q = &rem[k] * &lead_inv;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k - d + j] = &rem[k - d + j] - &(&q * c);
                }
                quot[k - d] = q;
            }
            rem.pop();
        }
        Ok((
            Self::from_coeffs(self.generators, quot),
            Self::from_coeffs(self.generators, rem),
        ))
    }

    /// First `order + 1` coefficients of the power series `1/self`; the
    /// constant term must be invertible.
    pub fn series_inverse(&self, order: usize) -> Result<Vec<GrassmannElement>> {
        let c0_inv = self.coeff(0).inv()?;
        let mut out: Vec<GrassmannElement> = Vec::with_capacity(order + 1);
        out.push(c0_inv.clone());
        for k in 1..=order {
            let mut acc = GrassmannElement::zero(self.generators);
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-&(&c0_inv * &acc));
        }
        Ok(out)
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ring for PolyZ {
    fn zero_like(&self) -> Self {
        Self::zero(self.generators)
    }

    fn one_like(&self) -> Self {
        Self::one(self.generators)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn r_add(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn r_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }

    fn r_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn r_neg(&self) -> Self {
        self.neg()
    }

    fn from_i64_like(&self, value: i64) -> Self {
        Self::constant(GrassmannElement::from_int(self.generators, value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::rat;

    fn c(v: i64) -> GrassmannElement {
        GrassmannElement::from_int(0, v)
    }

    #[test]
    fn division_reconstructs() {
        // (1+2z)(1+3z) = 1 + 5z + 6z² divided by 1+z
        let num = PolyZ::one_plus(&c(2)).mul(&PolyZ::one_plus(&c(3)));
        let den = PolyZ::one_plus(&c(1));
        let (q, r) = num.divrem(&den).unwrap();
        assert_eq!(q.coeff(1), c(6));
        assert_eq!(q.mul(&den).add(&r), num);
        assert_eq!(r.degree(), Some(0));
    }

    #[test]
    fn series_inverse_of_geometric() {
        let s = PolyZ::one_plus(&c(2)).series_inverse(4).unwrap();
        let want: Vec<_> = [1, -2, 4, -8, 16].iter().map(|v| c(*v)).collect();
        assert_eq!(s, want);
    }

    #[test]
    fn evaluation() {
        let p = PolyZ::one_plus(&c(2)).mul(&PolyZ::one_plus(&c(3)));
        assert_eq!(p.eval_rational(&rat(1)), c(12));
    }
}
