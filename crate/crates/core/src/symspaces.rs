//! Bases of the spaces `S^{N,s}(ΠV)` and supertraces of the induced action
//! of a diagonal operator.
//!
//! A basis vector is `ε_1^{k_1}⋯ε_n^{k_n} · ε_{1̂}^{i_1}⋯ε_{(m−s)^}^{i_{m−s}} ·
//! δ^{(j_1)}(ε_{(m−s+1)^})⋯δ^{(j_s)}(ε_{m̂})` with weight
//! `Σk + Σi − s − Σj` and parity `Σk + s`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::charfn::{Expansion, Spectrum};
use crate::error::{Error, Result};
use crate::grassmann::{rational_to_f64, GrassmannElement, Parity};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SNsBasisVector {
    /// Exponents of the odd coordinates, each 0 or 1.
    pub k: Vec<u8>,
    /// Exponents of the first `m − s` even coordinates.
    pub i: Vec<u32>,
    /// Derivative orders of the deltas on the last `s` even coordinates.
    pub j: Vec<u32>,
    pub s: usize,
}

impl SNsBasisVector {
    pub fn n(&self) -> usize {
        self.k.len()
    }

    pub fn m(&self) -> usize {
        self.i.len() + self.j.len()
    }

    pub fn k_sum(&self) -> i64 {
        self.k.iter().map(|&v| v as i64).sum()
    }

    pub fn i_sum(&self) -> i64 {
        self.i.iter().map(|&v| v as i64).sum()
    }

    pub fn j_sum(&self) -> i64 {
        self.j.iter().map(|&v| v as i64).sum()
    }

    pub fn weight(&self) -> i64 {
        self.k_sum() + self.i_sum() - self.s as i64 - self.j_sum()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit((self.k_sum() + self.s as i64) as usize)
    }
}

/// All ways to write `total` as an ordered sum of `parts` non-negative
/// integers.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=total {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut cur, &mut out);
    out
}

fn bit_vectors(n: usize) -> Vec<Vec<u8>> {
    (0u32..(1 << n))
        .map(|mask| (0..n).map(|a| ((mask >> a) & 1) as u8).collect())
        .collect()
}

/// Basis vectors of weight `N` in `S^{N,s}(ΠV)`, `dim V = n|m`; for
/// `0 < s < m` only those with `Σj ≤ p_max`.
pub fn enumerate(n: usize, m: usize, s: usize, weight: i64, p_max: u32) -> Result<Vec<SNsBasisVector>> {
    if s > m {
        return Err(Error::InvalidRegion { s, m });
    }
    let mut out = Vec::new();
    for k in bit_vectors(n) {
        let ksum: i64 = k.iter().map(|&v| v as i64).sum();
        let j_totals: Vec<i64> = if s == 0 {
            vec![0]
        } else if s == m {
            vec![ksum - m as i64 - weight]
        } else {
            (0..=p_max as i64).collect()
        };
        for jt in j_totals {
            if jt < 0 {
                continue;
            }
            let it = weight - ksum + s as i64 + jt;
            if it < 0 || (s == m && it != 0) {
                continue;
            }
            let is = compositions(it as u32, m - s);
            let js = compositions(jt as u32, s);
            for i in &is {
                for j in &js {
                    out.push(SNsBasisVector {
                        k: k.clone(),
                        i: i.clone(),
                        j: j.clone(),
                        s,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Cache of integer powers of spectrum entries.
pub struct PowerCache<'a> {
    spec: &'a Spectrum,
    y_inv: Vec<GrassmannElement>,
    cache: HashMap<(bool, usize, i64), GrassmannElement>,
}

impl<'a> PowerCache<'a> {
    pub fn new(spec: &'a Spectrum) -> Result<Self> {
        let y_inv = spec.y().iter().map(|y| y.inv()).collect::<Result<_>>()?;
        Ok(PowerCache {
            spec,
            y_inv,
            cache: HashMap::new(),
        })
    }

    fn y_pow(&mut self, mu: usize, e: i64) -> GrassmannElement {
        if let Some(v) = self.cache.get(&(true, mu, e)) {
            return v.clone();
        }
        let v = if e == 0 {
            GrassmannElement::one(self.spec.generators())
        } else if e > 0 {
            &self.y_pow(mu, e - 1) * &self.spec.y()[mu]
        } else {
            &self.y_pow(mu, e + 1) * &self.y_inv[mu]
        };
        self.cache.insert((true, mu, e), v.clone());
        v
    }

    /// `∏ x_a^{k_a} · ∏_{μ≤m−s} y_μ^{i_μ} · ∏_{ν>m−s} y_ν^{−1−j_ν}`.
    pub fn eigenvalue(&mut self, v: &SNsBasisVector) -> Result<GrassmannElement> {
        if v.n() != self.spec.n() || v.m() != self.spec.m() || v.s != v.j.len() {
            return Err(Error::DimensionMismatch(format!(
                "basis vector for {}|{} against spectrum {}|{}",
                v.n(),
                v.m(),
                self.spec.n(),
                self.spec.m()
            )));
        }
        let mut acc = GrassmannElement::one(self.spec.generators());
        for (a, &k) in v.k.iter().enumerate() {
            if k == 1 {
                acc = &acc * &self.spec.x()[a];
            }
        }
        for (mu, &e) in v.i.iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.y_pow(mu, e as i64);
            }
        }
        let off = v.i.len();
        for (t, &jv) in v.j.iter().enumerate() {
            acc = &acc * &self.y_pow(off + t, -1 - jv as i64);
        }
        Ok(acc)
    }
}

pub fn eigenvalue(v: &SNsBasisVector, spec: &Spectrum) -> Result<GrassmannElement> {
    PowerCache::new(spec)?.eigenvalue(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTraceResult {
    /// Entry `P` is the supertrace over basis vectors with `Σj ≤ P`; a single
    /// exact entry when the basis is finite.
    pub partial_sums: Vec<GrassmannElement>,
    /// `|y_{m−s}| / |y_{m−s+1}|` for the truncated regions.
    pub rho: Option<f64>,
}

impl TruncatedTraceResult {
    pub fn last(&self) -> &GrassmannElement {
        self.partial_sums.last().expect("at least one partial sum")
    }
}

/// Ratio of body magnitudes of the two `y`'s bounding region `s`.
pub fn region_ratio(spec: &Spectrum, s: usize) -> Option<f64> {
    let m = spec.m();
    if s == 0 || s >= m {
        return None;
    }
    let inner = spec.y()[m - s - 1].body().abs();
    let outer = spec.y()[m - s].body().abs();
    Some(rational_to_f64(&(inner / outer)))
}

pub fn supertrace(spec: &Spectrum, s: usize, weight: i64, p_max: u32) -> Result<TruncatedTraceResult> {
    let (n, m) = (spec.n(), spec.m());
    if s > m {
        return Err(Error::InvalidRegion { s, m });
    }
    let mut cache = PowerCache::new(spec)?;
    let g = spec.generators();
    let truncated = s > 0 && s < m;
    let levels = if truncated { p_max as usize + 1 } else { 1 };
    let mut by_level = vec![GrassmannElement::zero(g); levels];
    for v in enumerate(n, m, s, weight, p_max)? {
        let e = cache.eigenvalue(&v)?;
        let level = if truncated { v.j_sum() as usize } else { 0 };
        by_level[level] = if v.parity().is_odd() {
            &by_level[level] - &e
        } else {
            &by_level[level] + &e
        };
    }
    let mut partial_sums = Vec::with_capacity(levels);
    let mut acc = GrassmannElement::zero(g);
    for l in by_level {
        acc = &acc + &l;
        partial_sums.push(acc.clone());
    }
    Ok(TruncatedTraceResult {
        partial_sums,
        rho: region_ratio(spec, s),
    })
}

/// `str Λ^r(A) = (−1)^r · str S^r(ΠA)`.
pub fn lambda_trace(spec: &Spectrum, r: i64) -> Result<GrassmannElement> {
    if r < 0 {
        return Ok(GrassmannElement::zero(spec.generators()));
    }
    let t = supertrace(spec, 0, r, 0)?.last().clone();
    Ok(if r % 2 == 1 { -t } else { t })
}

/// Image of an `s = m` basis vector: a monomial in the dual coordinates of
/// weight `n − m − N`, times the Berezinian basis vector of `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualMonomial {
    /// Exponents of the odd dual coordinates, `1 − k_a`.
    pub alpha: Vec<u8>,
    /// Exponents of the even dual coordinates, `j_ν`.
    pub beta: Vec<u32>,
    pub weight: i64,
    /// Parity of the monomial itself.
    pub monomial_parity: Parity,
    /// Parity of `Ber V`, i.e. `n − m`.
    pub shift: Parity,
}

impl DualMonomial {
    pub fn parity(&self) -> Parity {
        self.monomial_parity + self.shift
    }
}

pub fn fourier(v: &SNsBasisVector) -> Result<DualMonomial> {
    let m = v.m();
    if v.s != m {
        return Err(Error::InvalidRegion { s: v.s, m });
    }
    let n = v.n();
    let alpha: Vec<u8> = v.k.iter().map(|&k| 1 - k).collect();
    let a_sum: usize = alpha.iter().map(|&a| a as usize).sum();
    Ok(DualMonomial {
        alpha,
        beta: v.j.clone(),
        weight: n as i64 - m as i64 - v.weight(),
        monomial_parity: Parity::from_bit(a_sum),
        shift: Parity::from_bit(n + m),
    })
}

/// Inverse of [`fourier`].
pub fn fourier_inverse(d: &DualMonomial) -> SNsBasisVector {
    SNsBasisVector {
        k: d.alpha.iter().map(|&a| 1 - a).collect(),
        i: Vec::new(),
        j: d.beta.clone(),
        s: d.beta.len(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NonConvergent,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NonConvergent => "nonconvergent",
            CheckStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceCheckEntry {
    pub n: i64,
    pub status: CheckStatus,
    pub lhs: GrassmannElement,
    pub rhs: GrassmannElement,
    /// Maximal coefficient error per truncation order (truncated mode only).
    pub errors: Vec<f64>,
    pub worst_ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TraceCheckReport {
    pub label: String,
    pub entries: Vec<TraceCheckEntry>,
}

impl TraceCheckReport {
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.status, CheckStatus::Pass | CheckStatus::Skipped))
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }
}

fn signed(n: i64, v: GrassmannElement) -> GrassmannElement {
    if n.rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}

/// `(−1)^N · str S^{N,m} = Ber A · str Λ^{n−m−N}(A⁻¹)` on a window.
pub fn verify_infinity_duality(spec: &Spectrum, lo: i64, hi: i64) -> Result<TraceCheckReport> {
    if lo > hi {
        return Err(Error::InvalidRange(format!("empty window [{lo}, {hi}]")));
    }
    let (n, m) = (spec.n() as i64, spec.m());
    let g = spec.generators();
    let inverse = spec.inverse().ok();
    let ber = spec.ber()?;
    let mut entries = Vec::new();
    for big_n in lo..=hi {
        let lhs = signed(big_n, supertrace(spec, m, big_n, 0)?.last().clone());
        let (status, rhs) = match &inverse {
            None => (CheckStatus::Skipped, GrassmannElement::zero(g)),
            Some(inv) => {
                let rhs = &ber * &lambda_trace(inv, n - m as i64 - big_n)?;
                let st = if lhs == rhs {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                };
                (st, rhs)
            }
        };
        entries.push(TraceCheckEntry {
            n: big_n,
            status,
            lhs,
            rhs,
            errors: Vec::new(),
            worst_ratio: None,
        });
    }
    Ok(TraceCheckReport {
        label: "duality".into(),
        entries,
    })
}

/// Tuning of the convergence test in the open annuli.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceOptions {
    pub margin: f64,
    /// First truncation order whose error ratio is checked.
    pub ratio_from: u32,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            margin: 0.05,
            ratio_from: 5,
        }
    }
}

fn max_coefficient_error(a: &GrassmannElement, b: &GrassmannElement) -> f64 {
    (a - b).max_abs_coefficient()
}

/// Compares region-`s` expansion coefficients with supertraces over
/// `S^{N,s}(ΠV)`. Exact for `s ∈ {0, m}`; otherwise the truncated sums must
/// reach `tol` by `p_max` and shrink geometrically with ratio at most
/// `ρ + margin`.
pub fn verify_region(
    spec: &Spectrum,
    s: usize,
    lo: i64,
    hi: i64,
    p_max: u32,
    tol: f64,
    opts: ConvergenceOptions,
) -> Result<TraceCheckReport> {
    let m = spec.m();
    if s > m {
        return Err(Error::InvalidRegion { s, m });
    }
    if lo > hi {
        return Err(Error::InvalidRange(format!("empty window [{lo}, {hi}]")));
    }
    let truncated = s > 0 && s < m;
    if truncated && tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidRange("tolerance must be positive".into()));
    }
    let exp = Expansion::new(spec)?;
    let rho = region_ratio(spec, s);
    let mut entries = Vec::new();
    for big_n in lo..=hi {
        let lhs = exp.coeff(s, big_n)?;
        let tr = supertrace(spec, s, big_n, p_max)?;
        let sums: Vec<GrassmannElement> = tr
            .partial_sums
            .iter()
            .map(|p| signed(big_n, p.clone()))
            .collect();
        let rhs = sums.last().cloned().expect("non-empty");
        if !truncated {
            let status = if lhs == rhs {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            };
            entries.push(TraceCheckEntry {
                n: big_n,
                status,
                lhs,
                rhs,
                errors: Vec::new(),
                worst_ratio: None,
            });
            continue;
        }
        let errors: Vec<f64> = sums.iter().map(|p| max_coefficient_error(&lhs, p)).collect();
        let limit = rho.unwrap_or(1.0) + opts.margin;
        let mut worst: Option<f64> = None;
        for p in (opts.ratio_from.max(1) as usize)..errors.len() {
            let prev = errors[p - 1];
            if prev == 0.0 {
                continue;
            }
            let r = errors[p] / prev;
            worst = Some(worst.map_or(r, |w: f64| w.max(r)));
        }
        let status = if *errors.last().unwrap() > tol {
            CheckStatus::Fail
        } else if worst.is_some_and(|w| w > limit) {
            CheckStatus::NonConvergent
        } else {
            CheckStatus::Pass
        };
        entries.push(TraceCheckEntry {
            n: big_n,
            status,
            lhs,
            rhs,
            errors,
            worst_ratio: worst,
        });
    }
    Ok(TraceCheckReport {
        label: format!("region {s}"),
        entries,
    })
}

#[derive(Clone, Debug)]
pub struct FourierEntry {
    pub n: i64,
    pub sources: usize,
    pub weight_ok: bool,
    pub parity_ok: bool,
    pub bijective: bool,
}

impl FourierEntry {
    pub fn passed(&self) -> bool {
        self.weight_ok && self.parity_ok && self.bijective
    }
}

/// For every weight reachable with `Σj ≤ max_j`, checks that the Fourier
/// map sends the `s = m` basis onto the `s = 0` basis of the dual space at
/// weight `n − m − N` (restricted to `Σβ ≤ max_j`), with the parity shift.
pub fn verify_fourier_bijection(n: usize, m: usize, max_j: u32) -> Result<Vec<FourierEntry>> {
    let hi = n as i64 - m as i64;
    let lo = -(m as i64) - max_j as i64;
    let mut out = Vec::new();
    for big_n in lo..=hi {
        let sources: Vec<SNsBasisVector> = enumerate(n, m, m, big_n, max_j)?
            .into_iter()
            .filter(|v| v.j_sum() <= max_j as i64)
            .collect();
        let mut weight_ok = true;
        let mut parity_ok = true;
        let mut images = BTreeSet::new();
        for v in &sources {
            let d = fourier(v)?;
            weight_ok &= d.weight == hi - big_n;
            parity_ok &= d.parity() == v.parity();
            images.insert((d.alpha.clone(), d.beta.clone()));
            weight_ok &= fourier_inverse(&d) == *v;
        }
        let targets: BTreeSet<(Vec<u8>, Vec<u32>)> = enumerate(n, m, 0, hi - big_n, 0)?
            .into_iter()
            .filter(|t| t.i_sum() <= max_j as i64)
            .map(|t| (t.k, t.i))
            .collect();
        let bijective = images.len() == sources.len() && images == targets;
        out.push(FourierEntry {
            n: big_n,
            sources: sources.len(),
            weight_ok,
            parity_ok,
            bijective,
        });
    }
    Ok(out)
}

/// Groups a window of supertraces by `N` for reporting.
pub fn trace_window(spec: &Spectrum, s: usize, lo: i64, hi: i64, p_max: u32) -> Result<BTreeMap<i64, TruncatedTraceResult>> {
    (lo..=hi)
        .map(|n| Ok((n, supertrace(spec, s, n, p_max)?)))
        .collect()
}

/// Body of a Grassmann element as `f64`, for convergence displays.
pub fn body_f64(e: &GrassmannElement) -> f64 {
    let b = e.body();
    if b.is_zero() {
        0.0
    } else {
        rational_to_f64(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn;
    use crate::grassmann::{rat, ratio};

    fn spec_1_2() -> Spectrum {
        Spectrum::rational(&[rat(3)], &[rat(1), rat(2)]).unwrap()
    }

    #[test]
    fn small_enumerations() {
        let v = enumerate(1, 2, 0, 0, 0).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].k, vec![0]);
        let v = enumerate(1, 2, 0, 1, 0).unwrap();
        assert_eq!(v.len(), 3);
        let v = enumerate(1, 1, 1, -1, 2).unwrap();
        let got: Vec<_> = v.iter().map(|b| (b.k[0], b.j[0])).collect();
        assert_eq!(got, vec![(0, 0), (1, 1)]);
        assert!(enumerate(1, 1, 1, 1, 5).unwrap().is_empty());
        assert!(enumerate(1, 1, 2, 0, 0).is_err());
    }

    #[test]
    fn weights_and_parities() {
        for v in enumerate(2, 3, 1, -2, 4).unwrap() {
            assert_eq!(v.weight(), -2);
            assert_eq!(v.parity(), Parity::from_bit((v.k_sum() + 1) as usize));
        }
    }

    #[test]
    fn eigenvalues() {
        let s = spec_1_2();
        let top = SNsBasisVector {
            k: vec![1],
            i: vec![],
            j: vec![0, 0],
            s: 2,
        };
        assert_eq!(eigenvalue(&top, &s).unwrap(), s.ber().unwrap());
        let mid = SNsBasisVector {
            k: vec![1],
            i: vec![2],
            j: vec![0],
            s: 1,
        };
        assert_eq!(
            eigenvalue(&mid, &s).unwrap(),
            GrassmannElement::scalar(0, ratio(3, 2))
        );
    }

    #[test]
    fn first_supertraces() {
        let s = spec_1_2();
        assert!(supertrace(&s, 0, 0, 0).unwrap().last().is_one());
        // −x + y1 + y2 = 0 for this spectrum
        assert!(supertrace(&s, 0, 1, 0).unwrap().last().is_zero());
        let s2 = Spectrum::rational(&[rat(5)], &[rat(1), rat(2)]).unwrap();
        assert_eq!(
            lambda_trace(&s2, 1).unwrap(),
            GrassmannElement::from_int(0, 2)
        );
        assert!(lambda_trace(&s2, 0).unwrap().is_one());
    }

    #[test]
    fn annulus_values() {
        let s = spec_1_2();
        let r = verify_region(&s, 1, 0, 0, 30, 1e-6, ConvergenceOptions::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries[0].lhs, GrassmannElement::from_int(0, 2));
        let exact = charfn::coeff(&s, 1, -1).unwrap();
        let tr = supertrace(&s, 1, -1, 40).unwrap();
        let err = (&exact + tr.last()).max_abs_coefficient();
        assert!(err < 1e-10);
    }

    #[test]
    fn fourier_examples() {
        let v = SNsBasisVector {
            k: vec![1],
            i: vec![],
            j: vec![0],
            s: 1,
        };
        let d = fourier(&v).unwrap();
        assert_eq!((d.alpha.clone(), d.beta.clone(), d.weight), (vec![0], vec![0], 0));
        let v = SNsBasisVector {
            k: vec![1, 0],
            i: vec![],
            j: vec![2],
            s: 1,
        };
        assert_eq!(v.weight(), -2);
        let d = fourier(&v).unwrap();
        assert_eq!((d.alpha, d.beta, d.weight), (vec![0, 1], vec![2], 3));
        assert!(verify_fourier_bijection(2, 2, 3).unwrap().iter().all(FourierEntry::passed));
    }
}
