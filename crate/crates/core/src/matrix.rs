//! Dense constant matrices over a finite field.
//!
//! Storage is row-major `u16` symbols; arithmetic goes through the [`Field`]
//! passed to each operation.

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row-major data. Panics if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u16>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<u16>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Permutation matrix with a 1 at `(i, perm[i])`.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &c) in perm.iter().enumerate() {
            m.set(i, c, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u16] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn add(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        Matrix { data, ..*self }
    }

    /// `self += other`.
    pub fn add_assign(&mut self, field: &Field, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = field.add(*a, b);
        }
    }

    pub fn scale(&self, field: &Field, c: u16) -> Matrix {
        let data = self.data.iter().map(|&a| field.mul(c, a)).collect();
        Matrix { data, ..*self }
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows, other.cols);
        self.mul_acc(field, other, &mut out);
        out
    }

    /// `out += self * other`.
    pub fn mul_acc(&self, field: &Field, other: &Matrix, out: &mut Matrix) {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        assert_eq!((out.rows, out.cols), (self.rows, other.cols));
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    let (lo, hi) = (i * out.cols, (i + 1) * out.cols);
                    field.axpy(&mut out.data[lo..hi], a, other.row(k));
                }
            }
        }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, field: &Field, v: &[u16]) -> Vec<u16> {
        let mut out = vec![0; self.cols];
        self.vec_mul_acc(field, v, &mut out);
        out
    }

    /// `out += v * self`.
    pub fn vec_mul_acc(&self, field: &Field, v: &[u16], out: &mut [u16]) {
        assert_eq!(v.len(), self.rows);
        assert_eq!(out.len(), self.cols);
        for (r, &c) in v.iter().enumerate() {
            field.axpy(out, c, self.row(r));
        }
    }

    /// Reduces a copy to row echelon form and returns the rank.
    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.row_reduce(field, None)
    }

    /// Gauss-Jordan elimination in place. If `companion` is given, it receives
    /// the same row operations. Returns the rank.
    fn row_reduce(&mut self, field: &Field, mut companion: Option<&mut Matrix>) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(pivot, rank);
            if let Some(c) = companion.as_deref_mut() {
                c.swap_rows(pivot, rank);
            }
            let inv = field.inv_nonzero(self.get(rank, col));
            scale_row(field, self.row_mut(rank), inv);
            if let Some(c) = companion.as_deref_mut() {
                scale_row(field, c.row_mut(rank), inv);
            }
            let pivot_row = self.row(rank).to_vec();
            let pivot_comp = companion.as_deref().map(|c| c.row(rank).to_vec());
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                let nf = field.neg(f);
                field.axpy(self.row_mut(r), nf, &pivot_row);
                if let (Some(c), Some(pc)) = (companion.as_deref_mut(), pivot_comp.as_ref()) {
                    field.axpy(c.row_mut(r), nf, pc);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (first, second) = self.data.split_at_mut(hi * cols);
        first[lo * cols..(lo + 1) * cols].swap_with_slice(&mut second[..cols]);
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let mut m = self.clone();
        let mut inv = Matrix::identity(self.rows);
        (m.row_reduce(field, Some(&mut inv)) == self.rows).then_some(inv)
    }

    /// Columns listed in `cols`, in that order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for r in 0..rows {
            out.row_mut(r).copy_from_slice(&self.row(r0 + r)[c0..c0 + cols]);
        }
        out
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        assert_eq!(perm.len(), self.rows);
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (i, &src) in perm.iter().enumerate() {
            out.row_mut(i).copy_from_slice(self.row(src));
        }
        out
    }

    /// Column `c` of the result is column `perm[c]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Matrix {
        self.select_columns(perm)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().filter(|&&v| v != 0).count()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c) != 0).count()
    }
}

fn scale_row(field: &Field, row: &mut [u16], c: u16) {
    for v in row.iter_mut() {
        *v = field.mul(*v, c);
    }
}

/// Row-sparse view of a matrix whose rows hold few nonzeros.
#[derive(Debug, Clone)]
pub struct SparseRows {
    cols: usize,
    rows: Vec<Vec<(u16, u16)>>,
}

impl SparseRows {
    pub fn from_dense(m: &Matrix) -> SparseRows {
        let rows = (0..m.rows())
            .map(|r| {
                m.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c as u16, v))
                    .collect()
            })
            .collect();
        SparseRows { cols: m.cols(), rows }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `out += v * self`.
    pub fn vec_mul_acc(&self, field: &Field, v: &[u16], out: &mut [u16]) {
        debug_assert_eq!(v.len(), self.rows.len());
        for (row, &coef) in self.rows.iter().zip(v) {
            if coef == 0 {
                continue;
            }
            for &(c, val) in row {
                let slot = &mut out[c as usize];
                *slot = field.add(*slot, field.mul(coef, val));
            }
        }
    }
}
