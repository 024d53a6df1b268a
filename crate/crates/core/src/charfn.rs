//! Laurent expansions of `Ber(E + zA)` for a diagonal `A` in each annulus
//! between consecutive poles, together with the recurrences the
//! coefficients satisfy.
//!
//! Regions are labelled by `s ∈ [0, m]`, the number of factors `1/(1 + z y)`
//! expanded around infinity: `s = 0` is the disc around zero, `s = m` the
//! neighbourhood of infinity, and `0 < s < m` the annulus
//! `1/|y_{m−s+1}| < |z| < 1/|y_{m−s}|`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Rational};
use crate::polyz::PolyZ;
use crate::supermatrix::{RationalFunctionZ, SuperMatrix};

/// Diagonal data `(x_1..x_n | y_1..y_m)` of an even supermatrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    generators: u8,
    x: Vec<GrassmannElement>,
    y: Vec<GrassmannElement>,
}

impl Spectrum {
    /// Builds and validates a spectrum.
    pub fn new(generators: u8, x: Vec<GrassmannElement>, y: Vec<GrassmannElement>) -> Result<Self> {
        let s = Self::new_unchecked(generators, x, y)?;
        s.validate()?;
        Ok(s)
    }

    /// Builds without the ordering checks; entries are lifted to
    /// `generators`.
    pub fn new_unchecked(
        generators: u8,
        x: Vec<GrassmannElement>,
        y: Vec<GrassmannElement>,
    ) -> Result<Self> {
        let lift = |v: Vec<GrassmannElement>| -> Result<Vec<GrassmannElement>> {
            v.into_iter().map(|e| e.lift(generators)).collect()
        };
        Ok(Spectrum {
            generators,
            x: lift(x)?,
            y: lift(y)?,
        })
    }

    /// Rational spectrum with no soul.
    pub fn rational(x: &[Rational], y: &[Rational]) -> Result<Self> {
        let conv = |v: &[Rational]| v.iter().map(|r| GrassmannElement::scalar(0, r.clone())).collect();
        Self::new(0, conv(x), conv(y))
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.x.iter().chain(&self.y).enumerate() {
            if !e.is_even() {
                let label = if i < self.x.len() {
                    format!("x[{i}]")
                } else {
                    format!("y[{}]", i - self.x.len())
                };
                return Err(Error::NonEvenSpectrum(label));
            }
        }
        for (i, y) in self.y.iter().enumerate() {
            if y.body().is_zero() {
                return Err(Error::NonInvertibleY(i));
            }
        }
        for i in 1..self.y.len() {
            let prev = self.y[i - 1].body().abs();
            let cur = self.y[i].body().abs();
            if prev == cur {
                return Err(Error::DuplicateBodyMagnitude(i - 1, i));
            }
            if prev > cur {
                return Err(Error::UnorderedBodies(i));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> u8 {
        self.generators
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn x(&self) -> &[GrassmannElement] {
        &self.x
    }

    pub fn y(&self) -> &[GrassmannElement] {
        &self.y
    }

    /// Every entry multiplied by `lambda`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        let sc = |v: &[GrassmannElement]| v.iter().map(|e| e.scale(lambda)).collect();
        Self::new(self.generators, sc(&self.x), sc(&self.y))
    }

    /// Spectrum of `A⁻¹`, with the `y` list reversed to keep the ordering.
    pub fn inverse(&self) -> Result<Self> {
        let x = self.x.iter().map(|e| e.inv()).collect::<Result<Vec<_>>>()?;
        let mut y = self.y.iter().map(|e| e.inv()).collect::<Result<Vec<_>>>()?;
        y.reverse();
        Self::new(self.generators, x, y)
    }

    /// `Ber A = ∏ x_a · ∏ y_μ⁻¹`.
    pub fn ber(&self) -> Result<GrassmannElement> {
        let mut acc = GrassmannElement::one(self.generators);
        for x in &self.x {
            acc = &acc * x;
        }
        for y in &self.y {
            acc = &acc * &y.inv()?;
        }
        Ok(acc)
    }

    pub fn to_supermatrix(&self) -> Result<SuperMatrix<GrassmannElement>> {
        SuperMatrix::diagonal(&self.x, &self.y, &GrassmannElement::zero(self.generators))
    }

    pub fn charfn(&self) -> RationalFunctionZ {
        RationalFunctionZ::diagonal(&self.x, &self.y, self.generators)
    }
}

/// `Ber(E + zA) = P(z) + Σ_μ A_μ / (1 + z y_μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub poly: PolyZ,
    pub residues: Vec<GrassmannElement>,
}

pub fn partial_fractions(spec: &Spectrum) -> Result<PartialFractions> {
    spec.validate()?;
    let g = spec.generators;
    let one = GrassmannElement::one(g);
    let y_inv: Vec<GrassmannElement> = spec.y.iter().map(|y| y.inv()).collect::<Result<_>>()?;
    let mut residues = Vec::with_capacity(spec.m());
    for (mu, yi) in y_inv.iter().enumerate() {
        let mut a = one.clone();
        for x in &spec.x {
            a = &a * &(&one - &(x * yi));
        }
        for (nu, y) in spec.y.iter().enumerate() {
            if nu != mu {
                a = &a * &(&one - &(y * yi)).inv()?;
            }
        }
        residues.push(a);
    }
    let f = spec.charfn();
    let poly = if spec.n() >= spec.m() {
        f.num.divrem(&f.den)?.0
    } else {
        PolyZ::zero(g)
    };
    let pf = PartialFractions { poly, residues };
    if !reconstructs(spec, &pf) {
        return Err(Error::CrossCheck(
            "partial fractions do not reproduce the characteristic function".into(),
        ));
    }
    Ok(pf)
}

/// `P·∏(1+zy) + Σ_μ A_μ·∏_{ν≠μ}(1+zy_ν) = ∏(1+zx)`.
pub fn reconstructs(spec: &Spectrum, pf: &PartialFractions) -> bool {
    let f = spec.charfn();
    let mut lhs = pf.poly.mul(&f.den);
    for (mu, a) in pf.residues.iter().enumerate() {
        let mut term = PolyZ::constant(a.clone());
        for (nu, y) in spec.y.iter().enumerate() {
            if nu != mu {
                term = term.mul(&PolyZ::one_plus(y));
            }
        }
        lhs = lhs.add(&term);
    }
    lhs == f.num
}

fn sign(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// Cached partial-fraction data for repeated coefficient queries.
#[derive(Clone, Debug)]
pub struct Expansion {
    spec: Spectrum,
    pf: PartialFractions,
    y_inv: Vec<GrassmannElement>,
}

impl Expansion {
    pub fn new(spec: &Spectrum) -> Result<Self> {
        let pf = partial_fractions(spec)?;
        let y_inv = spec.y.iter().map(|y| y.inv()).collect::<Result<_>>()?;
        Ok(Expansion {
            spec: spec.clone(),
            pf,
            y_inv,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spec
    }

    pub fn partial_fractions(&self) -> &PartialFractions {
        &self.pf
    }

    fn y_pow(&self, mu: usize, n: i64) -> GrassmannElement {
        let base = if n < 0 { &self.y_inv[mu] } else { &self.spec.y[mu] };
        base.pow(n.abs()).expect("non-negative power")
    }

    /// `(−1)^N · y_μ^N · A_μ`, the jump across the pole `−1/y_μ`.
    pub fn residue_term(&self, mu: usize, n: i64) -> GrassmannElement {
        let t = &self.y_pow(mu, n) * &self.pf.residues[mu];
        if sign(n) {
            -t
        } else {
            t
        }
    }

    /// Coefficient of `z^N` in region `s`.
    pub fn coeff(&self, s: usize, n: i64) -> Result<GrassmannElement> {
        let m = self.spec.m();
        if s > m {
            return Err(Error::InvalidRegion { s, m });
        }
        let mut acc = self.pf.poly.coeff(n);
        if n >= 0 {
            for mu in 0..m - s {
                acc = &acc + &self.residue_term(mu, n);
            }
        } else {
            for nu in m - s..m {
                acc = &acc - &self.residue_term(nu, n);
            }
        }
        Ok(acc)
    }

    pub fn window(&self, s: usize, lo: i64, hi: i64) -> Result<CoefficientWindow> {
        if lo > hi {
            return Err(Error::InvalidRange(format!("empty window [{lo}, {hi}]")));
        }
        let mut coeffs = BTreeMap::new();
        for n in lo..=hi {
            coeffs.insert(n, self.coeff(s, n)?);
        }
        if s == 0 {
            self.cross_check_zero(&coeffs, hi)?;
        }
        Ok(CoefficientWindow { s, coeffs })
    }

    /// Compares region-0 coefficients with the Cauchy product of
    /// `∏(1 + z x)` and the series of `1/∏(1 + z y)`.
    fn cross_check_zero(&self, coeffs: &BTreeMap<i64, GrassmannElement>, hi: i64) -> Result<()> {
        let series = cauchy_series(&self.spec, hi.max(0) as usize)?;
        for (&n, c) in coeffs {
            let want = if n < 0 {
                GrassmannElement::zero(self.spec.generators)
            } else {
                series[n as usize].clone()
            };
            if *c != want {
                return Err(Error::CrossCheck(format!(
                    "coefficient {n} near zero: {c} vs series {want}"
                )));
            }
        }
        Ok(())
    }
}

/// Coefficients `c_0..c_order` of `Ber(E + zA)` near zero by direct series
/// multiplication.
pub fn cauchy_series(spec: &Spectrum, order: usize) -> Result<Vec<GrassmannElement>> {
    let f = spec.charfn();
    let inv = f.den.series_inverse(order)?;
    Ok((0..=order)
        .map(|k| {
            (0..=k).fold(GrassmannElement::zero(spec.generators), |acc, j| {
                &acc + &(&f.num.coeff(j as i64) * &inv[k - j])
            })
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientWindow {
    pub s: usize,
    pub coeffs: BTreeMap<i64, GrassmannElement>,
}

pub fn coeff(spec: &Spectrum, s: usize, n: i64) -> Result<GrassmannElement> {
    Expansion::new(spec)?.coeff(s, n)
}

pub fn expand_window(spec: &Spectrum, s: usize, lo: i64, hi: i64) -> Result<CoefficientWindow> {
    Expansion::new(spec)?.window(s, lo, hi)
}

/// Elementary symmetric polynomials `b_0..b_m` of the `y`'s.
pub fn recurrence_b(spec: &Spectrum) -> Result<Vec<GrassmannElement>> {
    spec.validate()?;
    let den = spec.charfn().den;
    Ok((0..=spec.m() as i64).map(|j| den.coeff(j)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Zero,
    Infinity,
}

#[derive(Clone, Debug)]
pub struct RecurrenceEntry {
    pub k: i64,
    pub residual: GrassmannElement,
}

impl RecurrenceEntry {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub label: String,
    pub entries: Vec<RecurrenceEntry>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(RecurrenceEntry::passed)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.passed()).count()
    }
}

/// Zero side: `Σ_j c_{k+j} b_{m−j} = 0` for `k > n − m`.
/// Infinity side: `Σ_j c*_{k−j} b_j = 0` for `k < 0`.
pub fn verify_recurrence(spec: &Spectrum, side: Side, k_lo: i64, k_hi: i64) -> Result<RecurrenceReport> {
    if k_lo > k_hi {
        return Err(Error::InvalidRange(format!("empty range [{k_lo}, {k_hi}]")));
    }
    let (n, m) = (spec.n() as i64, spec.m() as i64);
    let exp = Expansion::new(spec)?;
    let b = recurrence_b(spec)?;
    let mut entries = Vec::new();
    match side {
        Side::Zero => {
            if k_lo <= n - m {
                return Err(Error::InvalidRange(format!(
                    "zero-side recurrence needs k > {}",
                    n - m
                )));
            }
            for k in k_lo..=k_hi {
                let mut acc = GrassmannElement::zero(spec.generators);
                for j in 0..=m {
                    acc = &acc + &(&exp.coeff(0, k + j)? * &b[(m - j) as usize]);
                }
                entries.push(RecurrenceEntry { k, residual: acc });
            }
        }
        Side::Infinity => {
            if k_hi >= 0 {
                return Err(Error::InvalidRange(
                    "infinity-side recurrence needs k < 0".into(),
                ));
            }
            let top = spec.m();
            for k in k_lo..=k_hi {
                let mut acc = GrassmannElement::zero(spec.generators);
                for j in 0..=m {
                    acc = &acc + &(&exp.coeff(top, k - j)? * &b[j as usize]);
                }
                entries.push(RecurrenceEntry { k, residual: acc });
            }
        }
    }
    let label = match side {
        Side::Zero => "zero",
        Side::Infinity => "infinity",
    };
    Ok(RecurrenceReport {
        label: label.into(),
        entries,
    })
}

/// `γ_N = c(0, N) − c(m, N)`.
pub fn gamma(spec: &Spectrum, n: i64) -> Result<GrassmannElement> {
    let exp = Expansion::new(spec)?;
    Ok(&exp.coeff(0, n)? - &exp.coeff(spec.m(), n)?)
}

/// Checks `b_0 γ_{k+m} + … + b_m γ_k = 0` for `k` in the window.
pub fn verify_gamma(spec: &Spectrum, k_lo: i64, k_hi: i64) -> Result<RecurrenceReport> {
    if k_lo > k_hi {
        return Err(Error::InvalidRange(format!("empty range [{k_lo}, {k_hi}]")));
    }
    let exp = Expansion::new(spec)?;
    let b = recurrence_b(spec)?;
    let m = spec.m() as i64;
    let top = spec.m();
    let gamma = |n: i64| -> Result<GrassmannElement> { Ok(&exp.coeff(0, n)? - &exp.coeff(top, n)?) };
    let mut entries = Vec::new();
    for k in k_lo..=k_hi {
        let mut acc = GrassmannElement::zero(spec.generators);
        for j in 0..=m {
            acc = &acc + &(&b[j as usize] * &gamma(k + m - j)?);
        }
        entries.push(RecurrenceEntry { k, residual: acc });
    }
    Ok(RecurrenceReport {
        label: "gamma".into(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{rat, ratio};

    fn spec_1_2() -> Spectrum {
        Spectrum::rational(&[rat(3)], &[rat(1), rat(2)]).unwrap()
    }

    fn ge(v: Rational) -> GrassmannElement {
        GrassmannElement::scalar(0, v)
    }

    #[test]
    fn validation() {
        assert!(spec_1_2().validate().is_ok());
        assert_eq!(
            Spectrum::rational(&[], &[rat(2), rat(1)]),
            Err(Error::UnorderedBodies(1))
        );
        let t12 = GrassmannElement::from_terms(2, [(vec![1, 2], rat(1))]).unwrap();
        assert_eq!(
            Spectrum::new(2, vec![], vec![t12, GrassmannElement::one(2)]),
            Err(Error::NonInvertibleY(0))
        );
        assert_eq!(
            Spectrum::rational(&[], &[rat(-2), rat(2)]),
            Err(Error::DuplicateBodyMagnitude(0, 1))
        );
    }

    #[test]
    fn residues_for_one_two() {
        let pf = partial_fractions(&spec_1_2()).unwrap();
        // (x − y1)/(y2 − y1) and (y2 − x)/(y2 − y1)
        assert_eq!(pf.residues, vec![ge(rat(2)), ge(rat(-1))]);
        assert!(pf.poly.is_zero());
        let single = Spectrum::rational(&[], &[rat(5)]).unwrap();
        let pf = partial_fractions(&single).unwrap();
        assert_eq!(pf.residues, vec![ge(rat(1))]);
    }

    #[test]
    fn polynomial_part_when_n_exceeds_m() {
        let s = Spectrum::rational(&[rat(2), rat(3)], &[rat(1)]).unwrap();
        let pf = partial_fractions(&s).unwrap();
        assert_eq!(pf.poly.coeff(1), ge(rat(6)));
        assert!(reconstructs(&s, &pf));
    }

    #[test]
    fn first_coefficients() {
        let e = Expansion::new(&spec_1_2()).unwrap();
        assert!(e.coeff(0, 0).unwrap().is_one());
        assert!(e.coeff(0, 1).unwrap().is_zero());
        assert_eq!(e.coeff(1, 0).unwrap(), ge(rat(2)));
        // A_2/(1 + 2z) = A_2/(2z) + …, with A_2 = −1
        assert_eq!(e.coeff(1, -1).unwrap(), ge(ratio(-1, 2)));
        assert!(e.coeff(3, 0).is_err());
    }

    #[test]
    fn elementary_symmetric() {
        let s = Spectrum::rational(&[], &[rat(1), rat(2), rat(3)]).unwrap();
        let b = recurrence_b(&s).unwrap();
        let want: Vec<_> = [1, 6, 11, 6].iter().map(|v| ge(rat(*v))).collect();
        assert_eq!(b, want);
    }

    #[test]
    fn recurrences_hold() {
        let s = spec_1_2();
        assert!(verify_recurrence(&s, Side::Zero, 0, 6).unwrap().passed());
        assert!(verify_recurrence(&s, Side::Infinity, -6, -1).unwrap().passed());
        assert!(verify_gamma(&s, -5, 5).unwrap().passed());
        assert!(verify_recurrence(&s, Side::Zero, -1, 3).is_err());
    }

    #[test]
    fn window_with_empty_support() {
        let s = Spectrum::rational(&[rat(2)], &[rat(1), rat(3), rat(4)]).unwrap();
        let w = expand_window(&s, 0, -3, 4).unwrap();
        for n in -3..0 {
            assert!(w.coeffs[&n].is_zero());
        }
    }
}
