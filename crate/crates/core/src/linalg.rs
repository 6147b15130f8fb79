//! Sparse and banded linear algebra used by the global model.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Collects `(row, col, value)` entries; duplicates are summed in insertion order.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, entries: Vec::new() }
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if value != 0.0 {
            self.entries.push((row, col, value));
        }
    }

    /// Adds `value` at `(row, col)` and `-value` at `(col, row)`.
    ///
    /// Both entries accumulate the same sequence of values up to sign, so the
    /// result is skew-symmetric bit for bit.
    pub fn add_skew_pair(&mut self, row: usize, col: usize, value: f64) {
        assert_ne!(row, col, "skew pairs cannot touch the diagonal");
        self.add(row, col, value);
        self.add(col, row, -value);
    }

    /// Adds `value` at `(row, col)` and at `(col, row)` (once on the diagonal).
    pub fn add_symmetric_pair(&mut self, row: usize, col: usize, value: f64) {
        self.add(row, col, value);
        if row != col {
            self.add(col, row, value);
        }
    }

    pub fn build(mut self) -> SparseMatrix {
        // Stable sort keeps insertion order among duplicates.
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..self.nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, row_ptr, col_idx, values }
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        TripletBuilder::new(nrows, ncols).build()
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let mut b = TripletBuilder::new(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                b.add(i, j, m[(i, j)]);
            }
        }
        b.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.col_idx[range.clone()].binary_search(&col) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.values[k] * x[self.col_idx[k]])
                    .sum()
            })
            .collect()
    }

    pub fn transpose_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows);
        let mut out = vec![0.0; self.ncols];
        for (r, c, v) in self.triplets() {
            out[c] += v * x[r];
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Largest absolute stored value.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Copy with column `j` scaled by `d[j]`.
    pub fn scale_columns(&self, d: &[f64]) -> SparseMatrix {
        assert_eq!(d.len(), self.ncols);
        let values = self
            .values
            .iter()
            .zip(&self.col_idx)
            .map(|(v, &c)| v * d[c])
            .collect();
        SparseMatrix { values, ..self.clone() }
    }

    /// `self + alpha * other`, entry patterns merged.
    pub fn add_scaled(&self, alpha: f64, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut b = TripletBuilder::new(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            b.add(r, c, v);
        }
        for (r, c, v) in other.triplets() {
            b.add(r, c, alpha * v);
        }
        b.build()
    }

    pub fn identity(n: usize) -> Self {
        let mut b = TripletBuilder::new(n, n);
        for i in 0..n {
            b.add(i, i, 1.0);
        }
        b.build()
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut b = TripletBuilder::new(self.nrows, other.ncols);
        for (r, k, v) in self.triplets() {
            for p in other.row_ptr[k]..other.row_ptr[k + 1] {
                b.add(r, other.col_idx[p], v * other.values[p]);
            }
        }
        b.build()
    }

    /// Copy with row `i` scaled by `d[i]`.
    pub fn scale_rows(&self, d: &[f64]) -> SparseMatrix {
        assert_eq!(d.len(), self.nrows);
        let mut out = self.clone();
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out.values[k] *= d[r];
            }
        }
        out
    }

    /// Lower and upper bandwidth of the stored pattern.
    pub fn bandwidths(&self) -> (usize, usize) {
        self.triplets().fold((0, 0), |(kl, ku), (r, c, _)| {
            if r > c {
                (kl.max(r - c), ku)
            } else {
                (kl, ku.max(c - r))
            }
        })
    }

    /// `max |A + Aᵀ|` over all entries.
    pub fn skew_defect(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v + self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    /// `max |A - Aᵀ|` over all entries.
    pub fn symmetry_defect(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }
}

/// LU factorization with partial pivoting of a banded matrix.
///
/// Storage is column-major band storage with room for the pivoting fill, as
/// in LAPACK `gbtrf`: entry `(i, j)` lives at `j * ldab + (kl + ku + i - j)`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    band: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn factor(a: &SparseMatrix) -> Result<Self> {
        assert_eq!(a.nrows(), a.ncols(), "banded LU needs a square matrix");
        let n = a.nrows();
        let (kl, ku) = a.bandwidths();
        let ldab = 2 * kl + ku + 1;
        let mut lu = Self { n, kl, ku, ldab, band: vec![0.0; ldab * n], pivots: vec![0; n] };
        for (r, c, v) in a.triplets() {
            *lu.at_mut(r, c) += v;
        }
        let reach = kl + ku;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.at(k, k).abs();
            for i in k + 1..=last {
                let v = lu.at(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular { column: k });
            }
            lu.pivots[k] = p;
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a = lu.at(k, j);
                    let b = lu.at(p, j);
                    *lu.at_mut(k, j) = b;
                    *lu.at_mut(p, j) = a;
                }
            }
            let pivot = lu.at(k, k);
            for i in k + 1..=last {
                let l = lu.at(i, k) / pivot;
                *lu.at_mut(i, k) = l;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        let u = lu.at(k, j);
                        *lu.at_mut(i, j) -= l * u;
                    }
                }
            }
        }
        Ok(lu)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.ku + self.kl >= j && i <= j + self.kl);
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.band[self.idx(i, j)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.band[k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + self.kl).min(n - 1) {
                    b[i] -= self.at(i, k) * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.at(k, j) * b[j];
            }
            b[k] = s / self.at(k, k);
        }
    }
}

/// Block-diagonal symmetric positive definite matrix with Cholesky factors.
#[derive(Debug, Clone)]
pub struct BlockDiagonal {
    offsets: Vec<usize>,
    blocks: Vec<DMatrix<f64>>,
    factors: Vec<Cholesky<f64, Dyn>>,
    dim: usize,
}

impl BlockDiagonal {
    /// Factors every block; fails on the first block that is not SPD.
    pub fn new(blocks: Vec<DMatrix<f64>>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut factors = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for (i, b) in blocks.iter().enumerate() {
            assert!(b.is_square());
            offsets.push(dim);
            dim += b.nrows();
            factors.push(Cholesky::new(b.clone()).ok_or(Error::NotPositiveDefinite { block: i })?);
        }
        Ok(Self { offsets, blocks, factors, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, &DMatrix<f64>)> {
        self.offsets.iter().copied().zip(self.blocks.iter())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for (off, b) in self.blocks() {
            let n = b.nrows();
            for i in 0..n {
                out[off + i] = (0..n).map(|j| b[(i, j)] * x[off + j]).sum();
            }
        }
        out
    }

    /// `M⁻¹ x` through the block Cholesky factors.
    pub fn solve(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for ((off, b), chol) in self.blocks().zip(&self.factors) {
            let n = b.nrows();
            let rhs = DVector::from_column_slice(&x[off..off + n]);
            let sol = chol.solve(&rhs);
            out[off..off + n].copy_from_slice(sol.as_slice());
        }
        out
    }

    /// `M⁻¹ A` for a dense `A` with matching row count.
    pub fn solve_dense(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(a.nrows(), self.dim);
        let mut out = DMatrix::zeros(a.nrows(), a.ncols());
        for ((off, b), chol) in self.blocks().zip(&self.factors) {
            let n = b.nrows();
            let sol = chol.solve(&a.rows(off, n).into_owned());
            out.rows_mut(off, n).copy_from(&sol);
        }
        out
    }

    /// Explicit block inverses, as a sparse matrix.
    pub fn inverse_sparse(&self) -> SparseMatrix {
        let mut t = TripletBuilder::new(self.dim, self.dim);
        for ((off, b), chol) in self.blocks().zip(&self.factors) {
            let inv = chol.inverse();
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    t.add(off + i, off + j, inv[(i, j)]);
                }
            }
        }
        t.build()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut t = TripletBuilder::new(self.dim, self.dim);
        for (off, b) in self.blocks() {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    t.add(off + i, off + j, b[(i, j)]);
                }
            }
        }
        t.build()
    }

    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.clone().symmetric_eigenvalues().min())
            .fold(f64::INFINITY, f64::min)
    }
}
