//! Laurent polynomials in the delay operator `D` and matrices over them.
//!
//! A [`LaurentMatrix`] is stored as a run of constant coefficient matrices
//! `M_j` for `j` in `[min_exp, max_exp]`, so that `M(D) = sum_j M_j D^j`. The
//! run is trimmed: the first and last coefficients are nonzero unless the
//! whole matrix is zero, in which case the run is empty.
//!
//! [`BlockSequence`] holds the coefficient vectors of a vector-valued Laurent
//! polynomial such as a message `u(D)` or ciphertext `y(D)`, starting at an
//! explicit time offset.

use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("matrix is not invertible over the Laurent polynomial ring")]
    NotInvertible,
}

/// A Laurent polynomial `sum_i coeffs[i] D^(lo + i)`, kept trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    lo: i32,
    coeffs: Vec<u16>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: u16) -> LaurentPoly {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: u16, exp: i32) -> LaurentPoly {
        LaurentPoly::new(exp, vec![c])
    }

    pub fn new(lo: i32, coeffs: Vec<u16>) -> LaurentPoly {
        let mut p = LaurentPoly { lo, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn min_exp(&self) -> i32 {
        self.lo
    }

    pub fn max_exp(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, exp: i32) -> u16 {
        let i = exp - self.lo;
        if i < 0 {
            return 0;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    /// `Some(c)` if this is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<u16> {
        match self.coeffs.len() {
            0 => Some(0),
            1 if self.lo == 0 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    /// `Some((c, j))` if this is the single term `c D^j`.
    pub fn as_monomial(&self) -> Option<(u16, i32)> {
        (self.coeffs.len() == 1).then(|| (self.coeffs[0], self.lo))
    }

    pub fn add(&self, field: &Field, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.max_exp().max(other.max_exp());
        let coeffs = (lo..=hi)
            .map(|e| field.add(self.coeff(e), other.coeff(e)))
            .collect();
        LaurentPoly::new(lo, coeffs)
    }

    pub fn neg(&self, field: &Field) -> LaurentPoly {
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, field: &Field, other: &LaurentPoly) -> LaurentPoly {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &Field, c: u16) -> LaurentPoly {
        LaurentPoly::new(self.lo, self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::new(self.lo + other.lo, poly_mul(field, &self.coeffs, &other.coeffs))
    }
}

fn poly_mul(field: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u16; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        field.axpy(&mut out[i..i + b.len()], ai, b);
    }
    out
}

fn poly_trim(mut a: Vec<u16>) -> Vec<u16> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(field: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            field.sub(x, y)
        })
        .collect();
    poly_trim(out)
}

/// Exact quotient `a / b` of polynomials; the remainder is asserted zero.
fn poly_div_exact(field: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut rem = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    if rem.len() < b.len() {
        assert!(rem.is_empty(), "inexact polynomial division");
        return Vec::new();
    }
    let lead_inv = field.inv_nonzero(*b.last().unwrap());
    let mut quot = vec![0u16; rem.len() - b.len() + 1];
    for shift in (0..quot.len()).rev() {
        let c = field.mul(rem[shift + b.len() - 1], lead_inv);
        quot[shift] = c;
        if c != 0 {
            let nc = field.neg(c);
            field.axpy(&mut rem[shift..shift + b.len()], nc, &b);
        }
    }
    assert!(rem.iter().all(|&v| v == 0), "inexact polynomial division");
    poly_trim(quot)
}

/// A matrix over `F[D, D^-1]`, stored as trimmed coefficient matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    min_exp: i32,
    coeffs: Vec<Matrix>,
}

impl LaurentMatrix {
    /// Builds `sum_i coeffs[i] D^(min_exp + i)`. All coefficients must share
    /// the given dimensions.
    pub fn from_coeffs(
        field: &Field,
        rows: usize,
        cols: usize,
        min_exp: i32,
        coeffs: Vec<Matrix>,
    ) -> LaurentMatrix {
        for c in &coeffs {
            assert_eq!((c.rows(), c.cols()), (rows, cols), "coefficient dimensions");
        }
        let mut m = LaurentMatrix {
            field: field.clone(),
            rows,
            cols,
            min_exp,
            coeffs,
        };
        m.trim();
        m
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> LaurentMatrix {
        LaurentMatrix::from_coeffs(field, rows, cols, 0, Vec::new())
    }

    pub fn constant(field: &Field, m: Matrix) -> LaurentMatrix {
        LaurentMatrix::from_coeffs(field, m.rows(), m.cols(), 0, vec![m])
    }

    pub fn identity(field: &Field, n: usize) -> LaurentMatrix {
        LaurentMatrix::constant(field, Matrix::identity(n))
    }

    /// `m * D^exp`.
    pub fn monomial(field: &Field, m: Matrix, exp: i32) -> LaurentMatrix {
        LaurentMatrix::from_coeffs(field, m.rows(), m.cols(), exp, vec![m])
    }

    pub fn from_entries(field: &Field, rows: usize, cols: usize, entries: &[LaurentPoly]) -> LaurentMatrix {
        assert_eq!(entries.len(), rows * cols);
        let nonzero = entries.iter().filter(|e| !e.is_zero());
        let lo = nonzero.clone().map(LaurentPoly::min_exp).min();
        let hi = nonzero.map(LaurentPoly::max_exp).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return LaurentMatrix::zero(field, rows, cols);
        };
        let mut coeffs = vec![Matrix::zeros(rows, cols); (hi - lo + 1) as usize];
        for (idx, e) in entries.iter().enumerate() {
            for (i, &c) in e.coeffs().iter().enumerate() {
                let j = (e.min_exp() + i as i32 - lo) as usize;
                coeffs[j].set(idx / cols, idx % cols, c);
            }
        }
        LaurentMatrix::from_coeffs(field, rows, cols, lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Matrix::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    /// Highest exponent present; `min_exp - 1` for the zero matrix.
    pub fn max_exp(&self) -> i32 {
        self.min_exp + self.coeffs.len() as i32 - 1
    }

    /// The coefficient matrices in exponent order, starting at [`Self::min_exp`].
    pub fn coeff_matrices(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// `M_j`, or a zero matrix when `j` is outside the stored range.
    pub fn coeff(&self, j: i32) -> Matrix {
        self.coeff_ref(j)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    pub fn coeff_ref(&self, j: i32) -> Option<&Matrix> {
        let i = j - self.min_exp;
        if i < 0 {
            return None;
        }
        self.coeffs.get(i as usize)
    }

    pub fn entry(&self, r: usize, c: usize) -> LaurentPoly {
        LaurentPoly::new(self.min_exp, self.coeffs.iter().map(|m| m.get(r, c)).collect())
    }

    pub fn entries(&self) -> Vec<LaurentPoly> {
        (0..self.rows * self.cols)
            .map(|i| self.entry(i / self.cols, i % self.cols))
            .collect()
    }

    fn check_field(&self, other: &LaurentMatrix) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::MixedFields)
        }
    }

    pub fn add(&self, other: &LaurentMatrix) -> Result<LaurentMatrix, AlgebraError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgebraError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exp().max(other.max_exp());
        let coeffs = (lo..=hi)
            .map(|j| match (self.coeff_ref(j), other.coeff_ref(j)) {
                (Some(a), Some(b)) => a.add(&self.field, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Matrix::zeros(self.rows, self.cols),
            })
            .collect();
        Ok(LaurentMatrix::from_coeffs(&self.field, self.rows, self.cols, lo, coeffs))
    }

    /// Polynomial matrix product by coefficient convolution.
    pub fn mul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix, AlgebraError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentMatrix::zero(&self.field, self.rows, other.cols));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![Matrix::zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                a.mul_acc(&self.field, b, &mut coeffs[i + j]);
            }
        }
        Ok(LaurentMatrix::from_coeffs(
            &self.field,
            self.rows,
            other.cols,
            self.min_exp + other.min_exp,
            coeffs,
        ))
    }

    pub fn scale(&self, c: u16) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|m| m.scale(&self.field, c)).collect();
        LaurentMatrix::from_coeffs(&self.field, self.rows, self.cols, self.min_exp, coeffs)
    }

    /// `self * D^s`.
    pub fn shift(&self, s: i32) -> LaurentMatrix {
        let mut m = self.clone();
        if !m.is_zero() {
            m.min_exp += s;
        }
        m
    }

    pub fn permute_rows(&self, perm: &[usize]) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|m| m.permute_rows(perm)).collect();
        LaurentMatrix::from_coeffs(&self.field, self.rows, self.cols, self.min_exp, coeffs)
    }

    pub fn permute_cols(&self, perm: &[usize]) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|m| m.permute_cols(perm)).collect();
        LaurentMatrix::from_coeffs(&self.field, self.rows, self.cols, self.min_exp, coeffs)
    }

    /// Assembles `[[a, b], [c, d]]` from four blocks.
    pub fn block2x2(
        a: &LaurentMatrix,
        b: &LaurentMatrix,
        c: &LaurentMatrix,
        d: &LaurentMatrix,
    ) -> Result<LaurentMatrix, AlgebraError> {
        for other in [b, c, d] {
            a.check_field(other)?;
        }
        let mismatch = |x: &LaurentMatrix, y: &LaurentMatrix| AlgebraError::DimensionMismatch {
            left: (x.rows, x.cols),
            right: (y.rows, y.cols),
        };
        if a.rows != b.rows || c.rows != d.rows {
            return Err(mismatch(a, b));
        }
        if a.cols != c.cols || b.cols != d.cols {
            return Err(mismatch(a, c));
        }
        let parts = [a, b, c, d];
        let nonzero = parts.iter().filter(|m| !m.is_zero());
        let lo = nonzero.clone().map(|m| m.min_exp).min().unwrap_or(0);
        let hi = nonzero.map(|m| m.max_exp()).max().unwrap_or(-1);
        let (rows, cols) = (a.rows + c.rows, a.cols + b.cols);
        let coeffs = (lo..=hi)
            .map(|j| {
                let mut out = Matrix::zeros(rows, cols);
                let offsets = [(0, 0), (0, a.cols), (a.rows, 0), (a.rows, a.cols)];
                for (m, (r0, c0)) in parts.iter().zip(offsets) {
                    if let Some(blk) = m.coeff_ref(j) {
                        out.set_block(r0, c0, blk);
                    }
                }
                out
            })
            .collect();
        Ok(LaurentMatrix::from_coeffs(&a.field, rows, cols, lo, coeffs))
    }

    /// Sub-block of entries `[r0, r0+rows) x [c0, c0+cols)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|m| m.block(r0, c0, rows, cols)).collect();
        LaurentMatrix::from_coeffs(&self.field, rows, cols, self.min_exp, coeffs)
    }

    /// Exact determinant. Rows are first shifted to polynomial form, then a
    /// fraction-free (Bareiss) elimination runs over `F[D]`.
    pub fn det(&self) -> Result<LaurentPoly, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::constant(1));
        }
        let f = &self.field;
        let shift = (-self.min_exp).max(0);
        // entries of D^shift * M, as ordinary polynomials
        let mut a: Vec<Vec<Vec<u16>>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let e = self.entry(r, c);
                        if e.is_zero() {
                            return Vec::new();
                        }
                        let base = (e.min_exp() + shift) as usize;
                        let mut v = vec![0u16; base];
                        v.extend_from_slice(e.coeffs());
                        v
                    })
                    .collect()
            })
            .collect();

        let mut negate = false;
        let mut prev: Vec<u16> = vec![1];
        for k in 0..n {
            let Some(pivot) = (k..n).find(|&r| !a[r][k].is_empty()) else {
                return Ok(LaurentPoly::zero());
            };
            if pivot != k {
                a.swap(pivot, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = poly_mul(f, &a[k][k], &a[i][j]);
                    let rhs = poly_mul(f, &a[i][k], &a[k][j]);
                    let num = poly_sub(f, &lhs, &rhs);
                    a[i][j] = poly_div_exact(f, &num, &prev);
                }
                a[i][k].clear();
            }
            prev = a[k][k].clone();
        }
        let mut det = LaurentPoly::new(-(shift * n as i32), a[n - 1][n - 1].clone());
        if negate {
            det = det.neg(f);
        }
        Ok(det)
    }

    /// True if no coefficient sits at a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.min_exp >= 0
    }
}

/// A run of equal-length vectors indexed from `offset`: block `i` of the
/// storage is the coefficient of `D^(offset + i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSequence {
    block_len: usize,
    offset: i32,
    blocks: Vec<Vec<u16>>,
}

impl BlockSequence {
    pub fn new(block_len: usize, blocks: Vec<Vec<u16>>) -> BlockSequence {
        BlockSequence::with_offset(block_len, 0, blocks)
    }

    pub fn with_offset(block_len: usize, offset: i32, blocks: Vec<Vec<u16>>) -> BlockSequence {
        for b in &blocks {
            assert_eq!(b.len(), block_len, "block length");
        }
        BlockSequence { block_len, offset, blocks }
    }

    pub fn zeros(block_len: usize, count: usize) -> BlockSequence {
        BlockSequence::new(block_len, vec![vec![0; block_len]; count])
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn offset(&self) -> i32 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<u16>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<u16>> {
        self.blocks
    }

    /// Coefficient of `D^t`, or `None` outside the stored range (an implicit zero).
    pub fn at(&self, t: i32) -> Option<&[u16]> {
        let i = t - self.offset;
        if i < 0 {
            return None;
        }
        self.blocks.get(i as usize).map(Vec::as_slice)
    }

    pub fn push(&mut self, block: Vec<u16>) {
        assert_eq!(block.len(), self.block_len, "block length");
        self.blocks.push(block);
    }

    /// Total Hamming weight.
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| weight(b)).sum()
    }

    pub fn add(&self, field: &Field, other: &BlockSequence) -> Result<BlockSequence, AlgebraError> {
        if self.block_len != other.block_len {
            return Err(AlgebraError::DimensionMismatch {
                left: (self.len(), self.block_len),
                right: (other.len(), other.block_len),
            });
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.len() as i32).max(other.offset + other.len() as i32);
        let blocks = (lo..hi)
            .map(|t| {
                let mut out = vec![0u16; self.block_len];
                for src in [self.at(t), other.at(t)].into_iter().flatten() {
                    for (o, &v) in out.iter_mut().zip(src) {
                        *o = field.add(*o, v);
                    }
                }
                out
            })
            .collect();
        Ok(BlockSequence::with_offset(self.block_len, lo, blocks))
    }

    /// Views the sequence as a 1 x block_len Laurent matrix.
    pub fn to_row_matrix(&self, field: &Field) -> LaurentMatrix {
        let coeffs = self
            .blocks
            .iter()
            .map(|b| Matrix::from_vec(1, self.block_len, b.clone()))
            .collect();
        LaurentMatrix::from_coeffs(field, 1, self.block_len, self.offset, coeffs)
    }
}

pub fn weight(v: &[u16]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Block `t` of `v(D) * M(D)`: `sum_j v_(t-j) M_j`, missing input blocks read as zero.
pub fn seq_block_at(field: &Field, v: &BlockSequence, m: &LaurentMatrix, t: i32) -> Vec<u16> {
    let mut out = vec![0u16; m.cols()];
    for (i, mj) in m.coeff_matrices().iter().enumerate() {
        let j = m.min_exp() + i as i32;
        if let Some(block) = v.at(t - j) {
            mj.vec_mul_acc(field, block, &mut out);
        }
    }
    out
}

/// Coefficient sequence of `v(D) * M(D)`, with offset `v.offset + M.min_exp`.
pub fn seq_mul_matrix(v: &BlockSequence, m: &LaurentMatrix) -> Result<BlockSequence, AlgebraError> {
    if v.block_len() != m.rows() {
        return Err(AlgebraError::DimensionMismatch {
            left: (v.len(), v.block_len()),
            right: (m.rows(), m.cols()),
        });
    }
    let field = m.field();
    if v.is_empty() || m.is_zero() {
        return Ok(BlockSequence::with_offset(m.cols(), v.offset(), Vec::new()));
    }
    let span = m.coeff_matrices().len();
    let mut out = vec![vec![0u16; m.cols()]; v.len() + span - 1];
    for (i, block) in v.blocks().iter().enumerate() {
        if block.iter().all(|&x| x == 0) {
            continue;
        }
        for (j, mj) in m.coeff_matrices().iter().enumerate() {
            mj.vec_mul_acc(field, block, &mut out[i + j]);
        }
    }
    Ok(BlockSequence::with_offset(m.cols(), v.offset() + m.min_exp(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn poly_trimming() {
        let p = LaurentPoly::new(-2, vec![0, 0, 3, 0]);
        assert_eq!(p.min_exp(), 0);
        assert_eq!(p.coeffs(), &[3]);
        assert_eq!(p.as_constant(), Some(3));
        assert!(LaurentPoly::new(5, vec![0, 0]).is_zero());
    }

    #[test]
    fn exponent_cancellation() {
        let f = gf(5);
        let d = LaurentMatrix::monomial(&f, Matrix::identity(2), 1);
        let dinv = LaurentMatrix::monomial(&f, Matrix::identity(2), -1);
        assert_eq!(d.mul(&dinv).unwrap(), LaurentMatrix::identity(&f, 2));
    }

    #[test]
    fn identity_is_neutral() {
        let f = gf(7);
        let m = LaurentMatrix::from_entries(
            &f,
            2,
            2,
            &[
                LaurentPoly::new(-1, vec![1, 2]),
                LaurentPoly::zero(),
                LaurentPoly::monomial(3, 2),
                LaurentPoly::constant(6),
            ],
        );
        assert_eq!(LaurentMatrix::identity(&f, 2).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&LaurentMatrix::identity(&f, 2)).unwrap(), m);
    }

    #[test]
    fn coeff_outside_range_is_zero() {
        let f = gf(3);
        let m = LaurentMatrix::monomial(&f, Matrix::identity(3), 2);
        assert_eq!(m.coeff(2), Matrix::identity(3));
        assert_eq!(m.coeff(1), Matrix::zeros(3, 3));
        assert_eq!(m.coeff(-7), Matrix::zeros(3, 3));
    }

    #[test]
    fn dimension_errors() {
        let f = gf(3);
        let a = LaurentMatrix::identity(&f, 2);
        let b = LaurentMatrix::identity(&f, 3);
        assert!(matches!(a.mul(&b), Err(AlgebraError::DimensionMismatch { .. })));
        assert!(matches!(a.add(&b), Err(AlgebraError::DimensionMismatch { .. })));
        let r = LaurentMatrix::zero(&f, 2, 3);
        assert_eq!(r.det(), Err(AlgebraError::NotSquare(2, 3)));
        let seq = BlockSequence::zeros(3, 2);
        assert!(seq_mul_matrix(&seq, &a).is_err());
        let other = LaurentMatrix::identity(&gf(5), 2);
        assert_eq!(a.mul(&other), Err(AlgebraError::MixedFields));
    }

    #[test]
    fn det_identity_and_monomials() {
        let f = gf(5);
        assert_eq!(LaurentMatrix::identity(&f, 4).det().unwrap(), LaurentPoly::constant(1));
        // diag(2D, 3D^-2) has determinant 6 D^-1 = D^-1
        let m = LaurentMatrix::from_entries(
            &f,
            2,
            2,
            &[
                LaurentPoly::monomial(2, 1),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
                LaurentPoly::monomial(3, -2),
            ],
        );
        assert_eq!(m.det().unwrap(), LaurentPoly::monomial(1, -1));
    }

    #[test]
    fn det_needs_row_swap() {
        let f = gf(7);
        // [[0, 1], [1, D]] -> det = -1
        let m = LaurentMatrix::from_entries(
            &f,
            2,
            2,
            &[
                LaurentPoly::zero(),
                LaurentPoly::constant(1),
                LaurentPoly::constant(1),
                LaurentPoly::monomial(1, 1),
            ],
        );
        assert_eq!(m.det().unwrap(), LaurentPoly::constant(6));
    }

    #[test]
    fn det_of_singular_polynomial_matrix() {
        let f = gf(3);
        let row = [LaurentPoly::new(0, vec![1, 1]), LaurentPoly::monomial(2, -1)];
        let m = LaurentMatrix::from_entries(&f, 2, 2, &[row[0].clone(), row[1].clone(), row[0].clone(), row[1].clone()]);
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn seq_mul_single_block() {
        let f = gf(5);
        let m = LaurentMatrix::from_coeffs(
            &f,
            2,
            2,
            -1,
            vec![
                Matrix::from_rows(&[vec![1, 0], vec![0, 1]]),
                Matrix::from_rows(&[vec![2, 3], vec![4, 0]]),
                Matrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            ],
        );
        let v = BlockSequence::new(2, vec![vec![1, 2]]);
        let out = seq_mul_matrix(&v, &m).unwrap();
        assert_eq!(out.offset(), -1);
        assert_eq!(out.len(), 3);
        for j in -1..=1 {
            assert_eq!(out.at(j).unwrap(), m.coeff(j).vec_mul(&f, &[1, 2]).as_slice());
            assert_eq!(seq_block_at(&f, &v, &m, j), m.coeff(j).vec_mul(&f, &[1, 2]));
        }
        let zero = seq_mul_matrix(&BlockSequence::zeros(2, 4), &m).unwrap();
        assert_eq!(zero.weight(), 0);
    }
}
