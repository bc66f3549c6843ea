//! Sparse Hermitian matrices in CSR form and the dense complex vector kernels
//! used by the propagator.
//!
//! Summation inside every kernel runs left to right in index order, so results
//! are bit-for-bit reproducible regardless of how rows are split across threads.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows per rayon task in [`SparseHermitian::matvec_into`].
const PAR_ROW_CHUNK: usize = 2048;

/// Below this dimension the matvec stays on the calling thread.
const PAR_MIN_DIM: usize = 8192;

/// Dense complex state vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Unit vector `e_index`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, alpha: Complex64) {
        for z in &mut self.0 {
            *z *= alpha;
        }
    }

    pub fn scale_real(&mut self, alpha: f64) {
        for z in &mut self.0 {
            *z *= alpha;
        }
    }

    /// `self += alpha * x`.
    pub fn axpy_assign(&mut self, alpha: Complex64, x: &StateVector) -> Result<()> {
        check_dims(self.dim(), x.dim())?;
        for (y, x) in self.0.iter_mut().zip(&x.0) {
            *y += alpha * x;
        }
        Ok(())
    }

    /// 2-norm of `self - other`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

impl From<Vec<Complex64>> for StateVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl FromIterator<Complex64> for StateVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// `Σ conj(x_i) y_i`, conjugate-linear in the first argument.
pub fn inner(x: &StateVector, y: &StateVector) -> Result<Complex64> {
    check_dims(x.dim(), y.dim())?;
    Ok(x.0
        .iter()
        .zip(&y.0)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b))
}

pub fn norm2(x: &StateVector) -> f64 {
    x.norm2()
}

/// Returns `y + alpha * x`.
pub fn axpy(alpha: Complex64, x: &StateVector, y: &StateVector) -> Result<StateVector> {
    let mut out = y.clone();
    out.axpy_assign(alpha, x)?;
    Ok(out)
}

/// Hermitian matrix in compressed-sparse-row form with strictly increasing
/// column indices inside each row.
///
/// Construction validates the structure and Hermiticity once; afterwards the
/// matrix is immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseHermitian {
    pub fn from_csr(
        dim: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let m = Self::from_csr_unchecked(dim, row_ptr, col_idx, values)?;
        m.check_hermitian()?;
        Ok(m)
    }

    /// Validates the CSR structure only.
    fn from_csr_unchecked(
        dim: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedMatrix("dimension must be positive".into()));
        }
        if row_ptr.len() != dim + 1 {
            return Err(Error::MalformedMatrix(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                dim + 1
            )));
        }
        if row_ptr[0] != 0 || row_ptr[dim] != col_idx.len() || col_idx.len() != values.len() {
            return Err(Error::MalformedMatrix(
                "row_ptr bounds do not match the stored entries".into(),
            ));
        }
        for row in 0..dim {
            let (lo, hi) = (row_ptr[row], row_ptr[row + 1]);
            if lo > hi {
                return Err(Error::MalformedMatrix(format!(
                    "row_ptr decreases at row {row}"
                )));
            }
            let cols = &col_idx[lo..hi];
            for (k, &c) in cols.iter().enumerate() {
                if c >= dim {
                    return Err(Error::MalformedMatrix(format!(
                        "column {c} out of range in row {row}"
                    )));
                }
                if k > 0 {
                    if cols[k - 1] == c {
                        return Err(Error::DuplicateEntry { row, col: c });
                    }
                    if cols[k - 1] > c {
                        return Err(Error::MalformedMatrix(format!(
                            "columns not sorted in row {row}"
                        )));
                    }
                }
            }
        }
        if let Some(z) = values
            .iter()
            .find(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::MalformedMatrix(format!("non-finite entry {z}")));
        }
        Ok(Self {
            dim,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds the matrix from `(row, col, value)` triplets in any order.
    /// Repeated coordinates are rejected.
    pub fn from_triplets<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut entries: Vec<_> = entries.into_iter().collect();
        if let Some(&(r, c, _)) = entries.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::MalformedMatrix(format!(
                "entry ({r}, {c}) out of range for dimension {dim}"
            )));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = entries.iter().map(|e| e.1).collect();
        let values = entries.iter().map(|e| e.2).collect();
        Self::from_csr(dim, row_ptr, col_idx, values)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim).collect(),
            values: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_triplets(
            diag.len(),
            diag.iter()
                .enumerate()
                .map(|(i, &d)| (i, i, Complex64::new(d, 0.0))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Column indices and values of one row.
    pub fn row(&self, i: usize) -> (&[usize], &[Complex64]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at `(i, j)`, zero if absent.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checks `H = H†` entrywise within `8·ε·max|entry|`.
    pub fn check_hermitian(&self) -> Result<()> {
        let tol = 8.0 * f64::EPSILON * self.max_abs_entry();
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&j, &z) in cols.iter().zip(vals) {
                // Each off-diagonal pair is visited from both sides; the
                // symmetric lookup covers entries missing on either side.
                let mirror = self.get(j, i).conj();
                if (z - mirror).norm() > tol {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// `y = H x`.
    pub fn matvec(&self, x: &StateVector) -> Result<StateVector> {
        let mut y = StateVector::zeros(self.dim);
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = H x` into a caller-provided buffer.
    pub fn matvec_into(&self, x: &StateVector, y: &mut StateVector) -> Result<()> {
        check_dims(self.dim, x.dim())?;
        check_dims(self.dim, y.dim())?;
        let x = x.as_slice();
        let row_dot = |i: usize| {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            self.col_idx[lo..hi]
                .iter()
                .zip(&self.values[lo..hi])
                .fold(Complex64::new(0.0, 0.0), |acc, (&j, &h)| acc + h * x[j])
        };
        let y = y.as_mut_slice();
        if self.dim < PAR_MIN_DIM {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row_dot(i);
            }
        } else {
            y.par_chunks_mut(PAR_ROW_CHUNK)
                .enumerate()
                .for_each(|(chunk, ys)| {
                    let base = chunk * PAR_ROW_CHUNK;
                    for (k, yi) in ys.iter_mut().enumerate() {
                        *yi = row_dot(base + k);
                    }
                });
        }
        Ok(())
    }

    /// Induced 1-norm: the largest absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut col_sums = vec![0.0f64; self.dim];
        for (&j, z) in self.col_idx.iter().zip(&self.values) {
            col_sums[j] += z.norm();
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    /// `alpha · H` for real `alpha` (keeps Hermiticity).
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|z| z * alpha).collect(),
        }
    }

    /// `-H`, used for backward evolution.
    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Row-major dense copy; intended for tests and small systems.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.dim]; self.dim];
        for (i, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &z) in cols.iter().zip(vals) {
                row[j] = z;
            }
        }
        out
    }
}
