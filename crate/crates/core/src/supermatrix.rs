//! Even supermatrices, determinants over the even subring, Berezinians and
//! the characteristic function `Ber(E + zA)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Parity, Rational};
use crate::polyz::PolyZ;
use crate::scalar::{Ring, SuperScalar};

pub type Matrix<S> = Vec<Vec<S>>;

fn check_square<S>(m: &Matrix<S>) -> Result<usize> {
    let k = m.len();
    if m.iter().any(|row| row.len() != k) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    Ok(k)
}

/// Determinant by dynamic programming over subsets of used columns.
/// Products are formed row by row, so the result is well defined as long as
/// at most one column contains odd entries. Needs an element to fix the
/// ambient ring when the matrix is empty.
fn det_dp<S: Ring>(m: &Matrix<S>, like: &S) -> S {
    let k = m.len();
    if k == 0 {
        return like.one_like();
    }
    assert!(k <= 20, "determinant size too large");
    let zero = like.zero_like();
    let mut dp: Vec<S> = vec![zero.clone(); 1 << k];
    dp[0] = like.one_like();
    for mask in 0usize..(1 << k) {
        let row = mask.count_ones() as usize;
        if row >= k || dp[mask].is_zero() {
            continue;
        }
        for c in 0..k {
            if mask & (1 << c) != 0 || m[row][c].is_zero() {
                continue;
            }
            let higher = (mask >> (c + 1)).count_ones();
            let term = dp[mask].r_mul(&m[row][c]);
            let next = mask | (1 << c);
            dp[next] = if higher % 2 == 1 {
                dp[next].r_sub(&term)
            } else {
                dp[next].r_add(&term)
            };
        }
    }
    dp[(1 << k) - 1].clone()
}

/// Determinant of a square matrix over a commutative ring.
pub fn det_commutative<S: Ring>(m: &Matrix<S>, like: &S) -> Result<S> {
    check_square(m)?;
    Ok(det_dp(m, like))
}

/// Determinant of a matrix with even entries.
pub fn det<S: SuperScalar>(m: &Matrix<S>, like: &S) -> Result<S> {
    check_square(m)?;
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_even_el() {
                return Err(Error::OddEntry { row: i, col: j });
            }
        }
    }
    Ok(det_dp(m, like))
}

/// Determinant where one column may be odd; used by the super Cramer rule.
fn det_one_odd_column<S: SuperScalar>(m: &Matrix<S>, like: &S) -> Result<S> {
    check_square(m)?;
    let mut odd_col: Option<usize> = None;
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.is_even_el() {
                continue;
            }
            match e.parity() {
                Some(Parity::Odd) if odd_col.is_none() || odd_col == Some(j) => {
                    odd_col = Some(j)
                }
                _ => return Err(Error::OddEntry { row: i, col: j }),
            }
        }
    }
    Ok(det_dp(m, like))
}

fn minor<S: Clone>(m: &Matrix<S>, skip_row: usize, skip_col: usize) -> Matrix<S> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Classical adjugate over a commutative ring: `adj(M)·M = det(M)·E`.
pub fn adjugate<S: Ring>(m: &Matrix<S>, like: &S) -> Result<Matrix<S>> {
    let k = check_square(m)?;
    let mut out = vec![vec![like.zero_like(); k]; k];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let d = det_dp(&minor(m, j, i), like);
            *slot = if (i + j) % 2 == 1 { d.r_neg() } else { d };
        }
    }
    Ok(out)
}

pub fn matmul<S: Ring>(a: &Matrix<S>, b: &Matrix<S>, like: &S) -> Result<Matrix<S>> {
    let inner = b.len();
    if a.iter().any(|row| row.len() != inner) {
        return Err(Error::DimensionMismatch("inner dimensions differ".into()));
    }
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![like.zero_like(); cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] = out[i][j].r_add(&aik.r_mul(&b[k][j]));
            }
        }
    }
    Ok(out)
}

fn matsub<S: Ring>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.r_sub(y)).collect())
        .collect()
}

/// Inverse of a matrix with even entries, via the adjugate.
fn inverse_even<S: SuperScalar>(m: &Matrix<S>, like: &S) -> Result<Matrix<S>> {
    let d = det(m, like)?;
    let d_inv = d.try_inv()?;
    let adj = adjugate(m, like)?;
    Ok(adj
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.r_mul(&d_inv)).collect())
        .collect())
}

/// Square supermatrix in block order: even indices first.
#[derive(Clone, PartialEq)]
pub struct SuperMatrix<S> {
    n: usize,
    m: usize,
    entries: Matrix<S>,
    like: S,
}

impl<S: SuperScalar> SuperMatrix<S> {
    /// Checks shape and the even-supermatrix parity pattern. `like` fixes the
    /// ambient ring (needed for 0|0 matrices).
    pub fn new(n: usize, m: usize, entries: Matrix<S>, like: &S) -> Result<Self> {
        let mat = Self::new_unchecked(n, m, entries, like)?;
        for i in 0..n + m {
            for j in 0..n + m {
                let e = &mat.entries[i][j];
                let diagonal_block = (i < n) == (j < n);
                let ok = if diagonal_block {
                    e.is_even_el()
                } else {
                    e.is_odd_el()
                };
                if !ok {
                    return Err(Error::NotEvenSupermatrix { row: i, col: j });
                }
            }
        }
        Ok(mat)
    }

    fn new_unchecked(n: usize, m: usize, entries: Matrix<S>, like: &S) -> Result<Self> {
        if entries.len() != n + m || entries.iter().any(|r| r.len() != n + m) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}×{0} array for dimension {n}|{m}",
                n + m
            )));
        }
        Ok(SuperMatrix {
            n,
            m,
            entries,
            like: like.zero_like(),
        })
    }

    pub fn identity(n: usize, m: usize, like: &S) -> Self {
        let k = n + m;
        let entries = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { like.one_like() } else { like.zero_like() })
                    .collect()
            })
            .collect();
        SuperMatrix {
            n,
            m,
            entries,
            like: like.zero_like(),
        }
    }

    pub fn diagonal(x: &[S], y: &[S], like: &S) -> Result<Self> {
        let mut mat = Self::identity(x.len(), y.len(), like);
        for (i, v) in x.iter().chain(y).enumerate() {
            mat.entries[i][i] = v.clone();
        }
        Self::new(x.len(), y.len(), mat.entries, like)
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn entries(&self) -> &Matrix<S> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.entries[i][j]
    }

    pub fn like(&self) -> &S {
        &self.like
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix<S> {
        rows.map(|i| cols.clone().map(|j| self.entries[i][j].clone()).collect())
            .collect()
    }

    fn blocks(&self) -> (Matrix<S>, Matrix<S>, Matrix<S>, Matrix<S>) {
        let (n, k) = (self.n, self.n + self.m);
        (
            self.block(0..n, 0..n),
            self.block(0..n, n..k),
            self.block(n..k, 0..n),
            self.block(n..k, n..k),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("supermatrix dimensions differ".into()));
        }
        let entries = matmul(&self.entries, &other.entries, &self.like)?;
        Self::new(self.n, self.m, entries, &self.like)
    }

    /// `M·x` for a column `x` in block order.
    pub fn apply(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.n + self.m {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok(self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(self.like.zero_like(), |acc, (a, b)| acc.r_add(&a.r_mul(b)))
            })
            .collect())
    }

    /// `det(A − B D⁻¹ C) · det(D)⁻¹` for blocks `[[A, B], [C, D]]`; the
    /// Schur complement may contain one odd column.
    fn ber_blocks(a: &Matrix<S>, b: &Matrix<S>, c: &Matrix<S>, d: &Matrix<S>, like: &S) -> Result<S> {
        let det_d = det(d, like)?;
        let det_d_inv = det_d
            .try_inv()
            .map_err(|_| Error::BerUndefined("odd-odd block is not invertible".into()))?;
        let schur = if d.is_empty() || a.is_empty() {
            a.clone()
        } else {
            let d_inv = inverse_even(d, like)?;
            let bdc = matmul(&matmul(b, &d_inv, like)?, c, like)?;
            matsub(a, &bdc)
        };
        Ok(det_one_odd_column(&schur, like)?.r_mul(&det_d_inv))
    }

    pub fn ber(&self) -> Result<S> {
        let (a, b, c, d) = self.blocks();
        Self::ber_blocks(&a, &b, &c, &d, &self.like)
    }

    /// Berezinian of the block-swapped matrix `[[D, C], [B, A]]`,
    /// i.e. `det(D − C A⁻¹ B) · det(A)⁻¹`.
    pub fn ber_star(&self) -> Result<S> {
        let (a, b, c, d) = self.blocks();
        Self::ber_blocks(&d, &c, &b, &a, &self.like)
    }

    pub fn block_swapped(&self) -> Self {
        let (a, b, c, d) = self.blocks();
        let k = self.n + self.m;
        let mut entries = vec![vec![self.like.zero_like(); k]; k];
        let m = self.m;
        for i in 0..k {
            for j in 0..k {
                entries[i][j] = match (i < m, j < m) {
                    (true, true) => d[i][j].clone(),
                    (true, false) => c[i][j - m].clone(),
                    (false, true) => b[i - m][j].clone(),
                    (false, false) => a[i - m][j - m].clone(),
                };
            }
        }
        SuperMatrix {
            n: self.m,
            m: self.n,
            entries,
            like: self.like.clone(),
        }
    }

    fn with_column(&self, col: usize, values: &[S]) -> Self {
        let mut entries = self.entries.clone();
        for (row, v) in entries.iter_mut().zip(values) {
            row[col] = v.clone();
        }
        SuperMatrix {
            n: self.n,
            m: self.m,
            entries,
            like: self.like.clone(),
        }
    }

    /// Solves `M·x = b` by the super Cramer rule: even unknowns are quotients
    /// of Berezinians, odd unknowns quotients of dual Berezinians. `b` is
    /// split into its even-vector and odd-vector parts, which are solved
    /// separately.
    pub fn cramer_solve(&self, rhs: &[S]) -> Result<Vec<S>> {
        let k = self.n + self.m;
        if rhs.len() != k {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let ber = self.ber()?;
        let ber_inv = ber
            .try_inv()
            .map_err(|_| Error::NotInvertible("Berezinian is not invertible".into()))?;
        let ber_star_inv = if self.m == 0 {
            None
        } else {
            match self.ber_star() {
                Ok(bs) => bs.try_inv().ok(),
                Err(_) => None,
            }
        };
        let mut x = vec![self.like.zero_like(); k];
        for part in self.split_rhs(rhs)? {
            if part.iter().all(|e| e.is_zero()) {
                continue;
            }
            let mut x_part = vec![self.like.zero_like(); k];
            for (i, slot) in x_part.iter_mut().enumerate().take(self.n) {
                let num = self.with_column(i, &part).ber()?;
                *slot = num.r_mul(&ber_inv);
            }
            match &ber_star_inv {
                Some(bs_inv) => {
                    for (mu, slot) in x_part.iter_mut().enumerate().skip(self.n) {
                        let num = self.with_column(mu, &part).ber_star()?;
                        *slot = num.r_mul(bs_inv);
                    }
                }
                None => {
                    // dual Berezinian undefined: back-substitute through D⁻¹
                    let (_, _, c, d) = self.blocks();
                    let d_inv = inverse_even(&d, &self.like)?;
                    let resid: Vec<S> = (0..self.m)
                        .map(|r| {
                            (0..self.n).fold(part[self.n + r].clone(), |acc, j| {
                                acc.r_sub(&c[r][j].r_mul(&x_part[j]))
                            })
                        })
                        .collect();
                    for r in 0..self.m {
                        x_part[self.n + r] = (0..self.m).fold(self.like.zero_like(), |acc, j| {
                            acc.r_add(&d_inv[r][j].r_mul(&resid[j]))
                        });
                    }
                }
            }
            for (xi, pi) in x.iter_mut().zip(x_part) {
                *xi = xi.r_add(&pi);
            }
        }
        Ok(x)
    }

    /// Splits a column into an even vector and an odd vector summand.
    fn split_rhs(&self, rhs: &[S]) -> Result<[Vec<S>; 2]> {
        let zero = self.like.zero_like();
        let mut even = vec![zero.clone(); rhs.len()];
        let mut odd = vec![zero; rhs.len()];
        for (i, e) in rhs.iter().enumerate() {
            let want_even = if i < self.n { Parity::Even } else { Parity::Odd };
            match e.parity() {
                _ if e.is_zero() => {}
                Some(p) if p == want_even => even[i] = e.clone(),
                Some(_) => odd[i] = e.clone(),
                None => {
                    return Err(Error::MixedParity);
                }
            }
        }
        Ok([even, odd])
    }
}

impl<S: SuperScalar + fmt::Display> fmt::Display for SuperMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<S: SuperScalar> fmt::Debug for SuperMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperMatrix({}|{}, {:?})", self.n, self.m, self.entries)
    }
}

/// Quotient of two polynomials in `z`, stored unreduced.
#[derive(Clone, Debug)]
pub struct RationalFunctionZ {
    pub num: PolyZ,
    pub den: PolyZ,
}

impl RationalFunctionZ {
    /// Value at a rational point; the denominator must be invertible there.
    pub fn eval(&self, z: &Rational) -> Result<GrassmannElement> {
        let d = self.den.eval_rational(z);
        Ok(&self.num.eval_rational(z) * &d.inv()?)
    }

    /// Equality by cross-multiplication.
    pub fn same_as(&self, other: &RationalFunctionZ) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// `∏(1 + z x_a) / ∏(1 + z y_μ)`.
    pub fn diagonal(x: &[GrassmannElement], y: &[GrassmannElement], generators: u8) -> Self {
        let prod = |v: &[GrassmannElement]| {
            v.iter()
                .fold(PolyZ::one(generators), |acc, e| acc.mul(&PolyZ::one_plus(e)))
        };
        RationalFunctionZ {
            num: prod(x),
            den: prod(y),
        }
    }
}

/// `Ber(E + zA)` as `num / D^{n+1}` with `D = det(E + zA₁₁)` and
/// `num = det((E + zA₀₀)·D − z²·A₀₁·adj(E + zA₁₁)·A₁₀)`.
pub fn charfn(a: &SuperMatrix<GrassmannElement>) -> Result<RationalFunctionZ> {
    let g = a.like().generators();
    let n = a.dim().0;
    let zp = PolyZ::zero(g);
    let lift = |blk: &Matrix<GrassmannElement>, add_identity: bool| -> Matrix<PolyZ> {
        blk.iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| {
                        let mut p = PolyZ::from_coeffs(g, vec![GrassmannElement::zero(g), e.clone()]);
                        if add_identity && i == j {
                            p = p.add(&PolyZ::one(g));
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    };
    let (a00, a01, a10, a11) = a.blocks();
    let x00 = lift(&a00, true);
    let x11 = lift(&a11, true);
    let d = det_commutative(&x11, &zp)?;
    let adj = adjugate(&x11, &zp)?;
    // zA₀₁ · adj · zA₁₀ already carries the z² factor
    let x01 = lift(&a01, false);
    let x10 = lift(&a10, false);
    let corr = matmul(&matmul(&x01, &adj, &zp)?, &x10, &zp)?;
    let s: Matrix<PolyZ> = (0..n)
        .map(|i| (0..n).map(|j| x00[i][j].mul(&d).sub(&corr[i][j])).collect())
        .collect();
    let num = det_commutative(&s, &zp)?;
    let den = d.pow((n + 1) as u32);
    Ok(RationalFunctionZ { num, den })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{rat, ratio};

    fn ge(g: u8, v: i64) -> GrassmannElement {
        GrassmannElement::from_int(g, v)
    }

    fn th(g: u8, i: usize) -> GrassmannElement {
        GrassmannElement::generator(g, i).unwrap()
    }

    #[test]
    fn determinants() {
        let z = ge(2, 0);
        let id: Matrix<_> = (0..3)
            .map(|i| (0..3).map(|j| ge(2, (i == j) as i64)).collect())
            .collect();
        assert!(det(&id, &z).unwrap().is_one());
        let t12 = &th(2, 1) * &th(2, 2);
        let m = vec![vec![ge(2, 2), ge(2, 0)], vec![ge(2, 0), &ge(2, 1) + &t12]];
        assert_eq!(det(&m, &z).unwrap(), &ge(2, 2) + &t12.scale(&rat(2)));
        let m = vec![vec![ge(2, 1), ge(2, 2)], vec![ge(2, 3), ge(2, 4)]];
        assert_eq!(det(&m, &z).unwrap(), ge(2, -2));
        let bad = vec![vec![th(2, 1)]];
        assert_eq!(det(&bad, &z), Err(Error::OddEntry { row: 0, col: 0 }));
    }

    #[test]
    fn adjugate_identity() {
        let z = ge(0, 0);
        let m = vec![
            vec![ge(0, 2), ge(0, 1), ge(0, 0)],
            vec![ge(0, 1), ge(0, 3), ge(0, 1)],
            vec![ge(0, 0), ge(0, 1), ge(0, 4)],
        ];
        let adj = adjugate(&m, &z).unwrap();
        let d = det(&m, &z).unwrap();
        let p = matmul(&adj, &m, &z).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p[i][j], if i == j { d.clone() } else { ge(0, 0) });
            }
        }
    }

    #[test]
    fn ber_of_identity_and_diagonal() {
        let z = ge(1, 0);
        assert!(SuperMatrix::identity(2, 2, &z).ber().unwrap().is_one());
        let d = SuperMatrix::diagonal(&[ge(1, 3)], &[ge(1, 2)], &z).unwrap();
        assert_eq!(d.ber().unwrap(), GrassmannElement::scalar(1, ratio(3, 2)));
    }

    #[test]
    fn odd_entry_in_diagonal_block_rejected() {
        let z = ge(1, 0);
        let e = vec![vec![th(1, 1), ge(1, 0)], vec![ge(1, 0), ge(1, 1)]];
        assert!(matches!(
            SuperMatrix::new(1, 1, e, &z),
            Err(Error::NotEvenSupermatrix { .. })
        ));
    }

    #[test]
    fn charfn_of_zero_and_diagonal() {
        let g = 0;
        let z = ge(g, 0);
        let a = SuperMatrix::new(1, 2, vec![vec![z.clone(); 3]; 3], &z).unwrap();
        let f = charfn(&a).unwrap();
        assert!(f.same_as(&RationalFunctionZ {
            num: PolyZ::one(g),
            den: PolyZ::one(g)
        }));
        let a = SuperMatrix::diagonal(&[ge(g, 3)], &[ge(g, 1), ge(g, 2)], &z).unwrap();
        let f = charfn(&a).unwrap();
        assert!(f.same_as(&RationalFunctionZ::diagonal(
            &[ge(g, 3)],
            &[ge(g, 1), ge(g, 2)],
            g
        )));
    }
}
