//! Desk-scale acceptance suite shared by `superber selftest` and the
//! `acceptance` test target.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::charfn::{self, Expansion, Side, Spectrum};
use crate::deltas::{self, DeltaFactor, DeltaProduct, DeltaSum, IntegralFormSpace};
use crate::error::Result;
use crate::grassmann::{rat, ratio, GrassmannElement, Rational};
use crate::random;
use crate::superring::{SuperPolynomial, Variable, VariableTable};
use crate::symspaces::{self, ConvergenceOptions, PowerCache};
use crate::vzforms;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Smaller random samples and windows.
    pub quick: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            quick: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seed: u64,
    pub elapsed_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<34} {}  ({} ms) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms,
            self.detail
        )
    }
}

pub const NAMES: [&str; 10] = [
    "1|2 worked example",
    "expansion at zero",
    "expansion at infinity",
    "recurrences",
    "intermediate annulus convergence",
    "region jumps",
    "scaling weight law",
    "1|1-form conditions",
    "delta calculus",
    "Fourier isomorphism",
];

fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(1)),
        2 | 3 => Some(Duration::from_secs(10)),
        5 => Some(Duration::from_secs(30)),
        _ => None,
    }
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => worked_example(),
        2 => zero_side(cfg),
        3 => infinity_side(cfg),
        4 => recurrences(cfg),
        5 => annulus(cfg),
        6 => region_jumps(cfg),
        7 => scaling(cfg),
        8 => forms(cfg),
        9 => delta_calculus(cfg),
        10 => fourier(cfg),
        _ => Ok((false, format!("unknown criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = budget(id) {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; over time budget {} s", limit.as_secs());
        }
    }
    CriterionResult {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("?").to_string(),
        passed,
        detail,
        seed: cfg.seed,
        elapsed_ms: elapsed.as_millis(),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=10).map(|id| run_criterion(id, cfg)).collect()
}

type Outcome = Result<(bool, String)>;

fn q(v: i64) -> Rational {
    rat(v)
}

fn worked_example() -> Outcome {
    let spec = Spectrum::rational(&[q(3)], &[q(1), q(2)])?;
    let exp = Expansion::new(&spec)?;
    let (x, y1, y2) = (q(3), q(1), q(2));
    let a = (&x - &y1) / (&y2 - &y1);
    let b = (&y2 - &x) / (&y2 - &y1);
    let c = |s: usize, n: i64| -> Result<Rational> {
        let e = exp.coeff(s, n)?;
        Ok(e.as_rational().expect("rational spectrum"))
    };
    let pw = |base: &Rational, k: i64| -> Rational {
        if k >= 0 {
            num_traits::pow(base.clone(), k as usize)
        } else {
            num_traits::pow(base.recip(), (-k) as usize)
        }
    };
    let sgn = |k: i64| if k.rem_euclid(2) == 0 { q(1) } else { q(-1) };
    let mut bad = Vec::new();
    if c(0, 0)? != q(1) {
        bad.push("c0".to_string());
    }
    if c(0, 1)? != &(&x - &y1) - &y2 {
        bad.push("c1".to_string());
    }
    for k in 0..=10 {
        let want = sgn(k) * (&a * pw(&y1, k) + &b * pw(&y2, k));
        if c(0, k)? != want {
            bad.push(format!("c_{k}"));
        }
    }
    for l in -10..=-1 {
        let want = -(sgn(l) * (&a * pw(&y1, l) + &b * pw(&y2, l)));
        if c(2, l)? != want {
            bad.push(format!("c*_{l}"));
        }
    }
    // annulus between the poles: A on the inner pole for N ≥ 0,
    // B on the outer pole for N < 0
    for k in -10..=10 {
        let want = if k >= 0 {
            sgn(k) * &a * pw(&y1, k)
        } else {
            -(sgn(k) * &b * pw(&y2, k))
        };
        if c(1, k)? != want {
            bad.push(format!("annulus_{k}"));
        }
    }
    Ok((bad.is_empty(), summarize_bad("coefficients checked", 43, &bad)))
}

fn summarize_bad(what: &str, total: usize, bad: &[String]) -> String {
    if bad.is_empty() {
        format!("{total} {what}")
    } else {
        let shown: Vec<&str> = bad.iter().take(6).map(String::as_str).collect();
        format!("{} of {total} {what} failed: {}", bad.len(), shown.join(", "))
    }
}

fn spectra(cfg: &SuiteConfig, count: usize, salt: u64) -> Result<Vec<Spectrum>> {
    let mut rng = random::rng(cfg.seed ^ salt);
    let count = if cfg.quick { count.min(6) } else { count };
    (0..count).map(|_| random::spectrum(&mut rng, 3, 3, 4)).collect()
}

fn signed(n: i64, e: GrassmannElement) -> GrassmannElement {
    if n.rem_euclid(2) == 1 {
        -e
    } else {
        e
    }
}

fn zero_side(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for (i, spec) in spectra(cfg, 20, 0x51)?.iter().enumerate() {
        let exp = Expansion::new(spec)?;
        for n in 0..=8 {
            total += 1;
            let tr = symspaces::supertrace(spec, 0, n, 0)?;
            if signed(n, tr.last().clone()) != exp.coeff(0, n)? {
                bad.push(format!("spectrum {i} N={n}"));
            }
        }
    }
    Ok((bad.is_empty(), summarize_bad("coefficients", total, &bad)))
}

fn infinity_side(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for (i, spec) in spectra(cfg, 20, 0x51)?.iter().enumerate() {
        let exp = Expansion::new(spec)?;
        let m = spec.m();
        let top = spec.n() as i64 - m as i64;
        for n in top - 8..=top {
            total += 1;
            let tr = symspaces::supertrace(spec, m, n, 0)?;
            if signed(n, tr.last().clone()) != exp.coeff(m, n)? {
                bad.push(format!("spectrum {i} N={n}"));
            }
        }
        if spec.x().iter().all(|x| !x.body().is_zero()) {
            let report = symspaces::verify_infinity_duality(spec, top - 8, top)?;
            if !report.passed() {
                bad.push(format!("spectrum {i} duality"));
            }
        }
    }
    Ok((bad.is_empty(), summarize_bad("checks", total, &bad)))
}

use num_traits::Zero;

fn recurrences(cfg: &SuiteConfig) -> Outcome {
    let mut all = vec![Spectrum::rational(&[q(3)], &[q(1), q(2)])?];
    all.extend(spectra(cfg, 20, 0x51)?);
    let mut bad = Vec::new();
    for (i, spec) in all.iter().enumerate() {
        let top = spec.n() as i64 - spec.m() as i64;
        let zero = charfn::verify_recurrence(spec, Side::Zero, top + 1, top + 12)?;
        let inf = charfn::verify_recurrence(spec, Side::Infinity, -12, -1)?;
        let gamma = charfn::verify_gamma(spec, -8, 8)?;
        for r in [zero, inf, gamma] {
            if !r.passed() {
                bad.push(format!("spectrum {i} {} ({} failures)", r.label, r.failures()));
            }
        }
    }
    Ok((bad.is_empty(), summarize_bad("recurrence families", 3 * all.len(), &bad)))
}

fn annulus(cfg: &SuiteConfig) -> Outcome {
    let cases = [
        (Spectrum::rational(&[q(3)], &[q(1), q(2)])?, vec![1usize]),
        (
            Spectrum::rational(&[q(3), ratio(1, 2)], &[q(1), q(3), q(9)])?,
            if cfg.quick { vec![1] } else { vec![1, 2] },
        ),
    ];
    let mut bad = Vec::new();
    let mut total = 0;
    let mut worst: f64 = 0.0;
    for (i, (spec, regions)) in cases.iter().enumerate() {
        for &s in regions {
            let report = symspaces::verify_region(spec, s, -4, 4, 30, 1e-6, ConvergenceOptions::default())?;
            for e in &report.entries {
                total += 1;
                if let Some(r) = e.worst_ratio {
                    worst = worst.max(r);
                }
                if e.status != symspaces::CheckStatus::Pass {
                    bad.push(format!("case {i} s={s} N={} {}", e.n, e.status.as_str()));
                }
            }
        }
    }
    let (ok, detail) = (bad.is_empty(), summarize_bad("coefficients", total, &bad));
    Ok((ok, format!("{detail}; worst error ratio {worst:.4}")))
}

/// `A_μ = ∏_a (1 − x_a/y_μ) · ∏_{ν≠μ} (1 − y_ν/y_μ)⁻¹`, evaluated directly.
fn residue_oracle(spec: &Spectrum, mu: usize) -> Result<GrassmannElement> {
    let g = spec.generators();
    let one = GrassmannElement::one(g);
    let inv = spec.y()[mu].inv()?;
    let mut acc = one.clone();
    for x in spec.x() {
        acc = &acc * &(&one - &(x * &inv));
    }
    for (nu, y) in spec.y().iter().enumerate() {
        if nu != mu {
            acc = &acc * &(&one - &(y * &inv)).inv()?;
        }
    }
    Ok(acc)
}

fn region_jumps(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for (i, spec) in spectra(cfg, 10, 0x6a)?.iter().enumerate() {
        let exp = Expansion::new(spec)?;
        let m = spec.m();
        for s in 0..m {
            let mu = m - s - 1;
            let a = residue_oracle(spec, mu)?;
            let y = &spec.y()[mu];
            for n in -6..=6 {
                total += 1;
                let jump = &exp.coeff(s, n)? - &exp.coeff(s + 1, n)?;
                let want = signed(n, &y.pow(n)? * &a);
                if jump != want {
                    bad.push(format!("spectrum {i} s={s} N={n}"));
                }
            }
        }
    }
    Ok((bad.is_empty(), summarize_bad("jumps", total, &bad)))
}

fn scaling(cfg: &SuiteConfig) -> Outcome {
    let lambda = ratio(2, 3);
    let mut bad = Vec::new();
    let mut total = 0;
    let mut rng = random::rng(cfg.seed ^ 0x7b);
    let mut cases = vec![Spectrum::rational(&[q(3)], &[q(1), q(2)])?];
    for _ in 0..if cfg.quick { 2 } else { 5 } {
        cases.push(random::spectrum(&mut rng, 2, 3, 3)?);
    }
    for (i, spec) in cases.iter().enumerate() {
        let scaled = spec.scaled(&lambda)?;
        let mut c0 = PowerCache::new(spec)?;
        let mut c1 = PowerCache::new(&scaled)?;
        let m = spec.m();
        let mut regions = vec![0, m];
        if m > 1 {
            regions.push(1);
        }
        for &s in &regions {
            for n in -3..=3 {
                let factor = GrassmannElement::scalar(spec.generators(), lambda_pow(&lambda, n));
                for v in symspaces::enumerate(spec.n(), m, s, n, 6)? {
                    total += 1;
                    if c1.eigenvalue(&v)? != &c0.eigenvalue(&v)? * &factor {
                        bad.push(format!("spectrum {i} s={s} N={n} eigenvalue"));
                    }
                }
                let t0 = symspaces::supertrace(spec, s, n, 6)?;
                let t1 = symspaces::supertrace(&scaled, s, n, 6)?;
                for (p0, p1) in t0.partial_sums.iter().zip(&t1.partial_sums) {
                    total += 1;
                    if *p1 != p0 * &factor {
                        bad.push(format!("spectrum {i} s={s} N={n} partial sum"));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), summarize_bad("scaled values", total, &bad)))
}

fn lambda_pow(l: &Rational, n: i64) -> Rational {
    if n >= 0 {
        num_traits::pow(l.clone(), n as usize)
    } else {
        num_traits::pow(l.recip(), (-n) as usize)
    }
}

fn forms(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=3 {
        let f = vzforms::ber_witness(n, 1)?;
        let s = vzforms::summarize(&f)?;
        if !s.passed() {
            bad.push(format!("witness {n}|1"));
        }
    }
    let mut rng = random::rng(cfg.seed ^ 0x8c);
    let dims = [(1, 1), (2, 1), (1, 2), (2, 2)];
    let count = if cfg.quick { 16 } else { 50 };
    let mut discrepancies = 0;
    let mut closed = 0;
    for i in 0..count {
        let (n, m) = dims[i % dims.len()];
        let f = random::form_candidate(&mut rng, n, m, i % 2 == 0)?;
        let c = vzforms::is_closed(&f.space, &vzforms::omega(&f)?);
        if c != vzforms::pde_holds(&f)? {
            discrepancies += 1;
        }
        closed += usize::from(c);
    }
    if discrepancies > 0 {
        bad.push(format!("{discrepancies} closedness discrepancies"));
    }
    let spots = if cfg.quick { 4 } else { 10 };
    let mut spot_fail = 0;
    for i in 0..spots {
        let f = vzforms::ber_witness(1 + i % 3, 1)?;
        let g = random::group_element(&mut rng, 3)?;
        if !vzforms::ber_spot_check(&f, &g)? {
            spot_fail += 1;
        }
    }
    if spot_fail > 0 {
        bad.push(format!("{spot_fail} finite group spot checks"));
    }
    let detail = format!(
        "3 witnesses, {count} candidates ({closed} closed, {discrepancies} discrepancies), {spots} group elements"
    );
    Ok((bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; failed: {}", bad.join(", ")) }))
}

fn normalization_examples() -> Result<bool> {
    let table = VariableTable::new(vec![Variable::even("t")])?;
    let t_pow = |e: i32, k: u32| -> Result<DeltaSum> {
        let c = SuperPolynomial::monomial(&table, vec![e], GrassmannElement::one(0))?;
        DeltaSum::from_product(&DeltaProduct::new(c, vec![DeltaFactor { var: 0, order: k }])?).normalize()
    };
    let delta = |c: i64| -> Result<DeltaSum> {
        Ok(DeltaSum::from_product(&DeltaProduct::new(
            SuperPolynomial::from_rational(&table, 0, q(c)),
            vec![DeltaFactor { var: 0, order: 0 }],
        )?))
    };
    Ok(t_pow(1, 0)?.is_zero() && t_pow(1, 1)? == delta(-1)? && t_pow(2, 2)? == delta(2)?)
}

fn delta_calculus(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut rng = random::rng(cfg.seed ^ 0x9d);
    let dims = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)];
    let count = if cfg.quick { 6 } else { 20 };
    for i in 0..count {
        let (n, m) = dims[i % dims.len()];
        let g = if n + m >= 4 { 2 } else { 3 };
        let t = random::even_invertible(&mut rng, n, m, g)?;
        let (factor, ber) = deltas::delta_as_ber_basis(&t)?;
        if factor != ber {
            bad.push(format!("substitution {i} ({n}|{m})"));
        }
    }
    let forms = if cfg.quick { 15 } else { 50 };
    for i in 0..forms {
        let (n, m) = [(1, 1), (2, 1), (1, 2), (2, 2)][i % 4];
        let space = IntegralFormSpace::new(n, m, 0)?;
        let sigma = random::integral_form(&mut rng, &space)?;
        let dd = deltas::integral_d(&space, &deltas::integral_d(&space, &sigma));
        if !dd.poly.is_zero() {
            bad.push(format!("d² on form {i}"));
        }
    }
    if !normalization_examples()? {
        bad.push("normalization examples".into());
    }
    let detail = format!("{count} substitutions, {forms} forms, 3 rewrites");
    Ok((bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; failed: {}", bad.join(", ")) }))
}

fn fourier(_cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 0..=3 {
        for m in 0..=3 {
            for e in symspaces::verify_fourier_bijection(n, m, 4)? {
                total += 1;
                if !e.passed() {
                    bad.push(format!("{n}|{m} N={}", e.n));
                }
            }
        }
    }
    Ok((bad.is_empty(), summarize_bad("weights", total, &bad)))
}
