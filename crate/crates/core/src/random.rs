//! Seeded random instances for the property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charfn::Spectrum;
use crate::deltas::{IntegralForm, IntegralFormSpace};
use crate::error::Result;
use crate::grassmann::{ratio, GrassmannElement, Parity};
use crate::superring::SuperPolynomial;
use crate::supermatrix::SuperMatrix;
use crate::vzforms::{FormCandidate, FormSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_ratio(rng: &mut impl Rng) -> crate::grassmann::Rational {
    let den = rng.gen_range(1..=3);
    let mut num = rng.gen_range(1..=5);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    ratio(num, den)
}

/// Random element of the given parity with zero body.
pub fn soul(rng: &mut impl Rng, g: u8, parity: Parity) -> GrassmannElement {
    let mut out = GrassmannElement::zero(g);
    if g == 0 {
        return out;
    }
    let masks: Vec<u32> = (1u32..(1 << g))
        .filter(|mask| (mask.count_ones() % 2 == 1) == parity.is_odd())
        .collect();
    if masks.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=2) {
        let mask = *masks.choose(rng).expect("non-empty");
        let gens: Vec<usize> = (0..g as usize)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| i + 1)
            .collect();
        let term = GrassmannElement::from_terms(g, [(gens, small_ratio(rng))]).expect("in range");
        out = &out + &term;
    }
    out
}

fn even_with_body(rng: &mut impl Rng, g: u8, body: crate::grassmann::Rational) -> GrassmannElement {
    &GrassmannElement::scalar(g, body) + &soul(rng, g, Parity::Even)
}

/// Random spectrum in general position with `n ≤ n_max`, `1 ≤ m ≤ m_max`
/// and `G ≤ g_max`; all bodies of `x` are nonzero.
pub fn spectrum(rng: &mut impl Rng, n_max: usize, m_max: usize, g_max: u8) -> Result<Spectrum> {
    let n = rng.gen_range(0..=n_max);
    let m = rng.gen_range(1..=m_max);
    let g = rng.gen_range(0..=g_max);
    let mut mags: Vec<i64> = (1..=6).collect();
    mags.shuffle(rng);
    let mut mags: Vec<i64> = mags.into_iter().take(m).collect();
    mags.sort_unstable();
    let y = mags
        .into_iter()
        .map(|v| {
            let v = if rng.gen_bool(0.5) { -v } else { v };
            even_with_body(rng, g, ratio(v, 1))
        })
        .collect();
    let x = (0..n)
        .map(|_| {
            let b = small_ratio(rng);
            even_with_body(rng, g, b)
        })
        .collect();
    Spectrum::new(g, x, y)
}

/// Even supermatrix with invertible body and random souls.
pub fn even_invertible(rng: &mut impl Rng, n: usize, m: usize, g: u8) -> Result<SuperMatrix<GrassmannElement>> {
    let size = n + m;
    loop {
        let mut entries = vec![vec![GrassmannElement::zero(g); size]; size];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let odd = (i < n) != (j < n);
                *e = if odd {
                    soul(rng, g, Parity::Odd)
                } else {
                    let body = if rng.gen_bool(0.6) || i == j {
                        ratio(rng.gen_range(-3..=3), 1)
                    } else {
                        ratio(0, 1)
                    };
                    even_with_body(rng, g, body)
                };
            }
        }
        let t = SuperMatrix::new(n, m, entries, &GrassmannElement::zero(g))?;
        if t.ber().is_ok() && t.block_swapped().ber().is_ok() {
            return Ok(t);
        }
    }
}

/// Sum of a few monomials `f(x, ξ)·(x*)^{(α, β)}` with polynomial `f`.
pub fn integral_form(rng: &mut impl Rng, space: &IntegralFormSpace) -> Result<IntegralForm> {
    let (n, m) = (space.n, space.m);
    let g = space.generators;
    let mut poly = SuperPolynomial::zero(&space.table, g);
    for _ in 0..rng.gen_range(1..=3) {
        let mut exps = vec![0; space.table.len()];
        for a in 0..n {
            exps[a] = rng.gen_range(0..=2);
            exps[space.dual(a)] = rng.gen_range(0..=1);
        }
        for mu in 0..m {
            exps[n + mu] = rng.gen_range(0..=1);
            exps[space.dual(n + mu)] = rng.gen_range(0..=3);
        }
        let c = GrassmannElement::scalar(g, small_ratio(rng));
        poly = &poly + &SuperPolynomial::monomial(&space.table, exps, c)?;
    }
    Ok(IntegralForm { poly })
}

fn xh_monomial(rng: &mut impl Rng, space: &FormSpace, parity: Parity) -> Result<SuperPolynomial> {
    let mut exps = vec![0; space.table.len()];
    let mut odd_count = 0;
    for a in 0..space.dim() {
        let v = space.xh(a);
        if space.index_parity(a) == Parity::Even {
            if rng.gen_bool(0.5) {
                exps[v] = 1;
                odd_count += 1;
            }
        } else {
            exps[v] = rng.gen_range(-2..=2);
        }
    }
    if (odd_count % 2 == 1) != parity.is_odd() {
        // flip one odd coordinate to fix the parity
        match (0..space.n).find(|&a| exps[space.xh(a)] == 0) {
            Some(a) => exps[space.xh(a)] = 1,
            None => {
                if space.n == 0 {
                    return Ok(SuperPolynomial::zero(&space.table, space.generators));
                }
                exps[space.xh(0)] = 0;
            }
        }
    }
    SuperPolynomial::monomial(
        &space.table,
        exps,
        GrassmannElement::scalar(space.generators, small_ratio(rng)),
    )
}

/// Linear candidate `x1_a L_a`; with `potential` the components are
/// `L_a = ∂Φ/∂xh_a` for a random odd `Φ`, otherwise independent monomials
/// of parity `ã`.
pub fn form_candidate(rng: &mut impl Rng, n: usize, m: usize, potential: bool) -> Result<FormCandidate> {
    let space = FormSpace::new(n, m, 0, 0)?;
    loop {
        let comps: Vec<SuperPolynomial> = if potential {
            let mut phi = SuperPolynomial::zero(&space.table, 0);
            for _ in 0..rng.gen_range(1..=3) {
                phi = &phi + &xh_monomial(rng, &space, Parity::Odd)?;
            }
            (0..space.dim()).map(|a| phi.lderiv_at(space.xh(a))).collect()
        } else {
            (0..space.dim())
                .map(|a| {
                    let mut c = SuperPolynomial::zero(&space.table, 0);
                    for _ in 0..rng.gen_range(0..=2) {
                        c = &c + &xh_monomial(rng, &space, space.index_parity(a))?;
                    }
                    Ok(c)
                })
                .collect::<Result<_>>()?
        };
        if comps.iter().any(|c| !c.is_zero()) {
            return FormCandidate::from_components(space, &comps);
        }
    }
}

/// Even invertible 1|1 matrix with odd off-diagonal entries.
pub fn group_element(rng: &mut impl Rng, g: u8) -> Result<SuperMatrix<GrassmannElement>> {
    even_invertible(rng, 1, 1, g).and_then(|t| {
        if t.entry(0, 0).body() == ratio(0, 1) || t.entry(1, 1).body() == ratio(0, 1) {
            group_element(rng, g)
        } else {
            Ok(t)
        }
    })
}
