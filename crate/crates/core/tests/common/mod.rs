//! Dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tevo_core::{SparseHermitian, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn dense(h: &SparseHermitian) -> Array2<Complex64> {
    let d = h.dim();
    let mut m = Array2::zeros((d, d));
    for i in 0..d {
        let (cols, vals) = h.row(i);
        for (&j, &z) in cols.iter().zip(vals) {
            m[[i, j]] = z;
        }
    }
    m
}

pub fn to_array(v: &StateVector) -> Array1<Complex64> {
    v.iter().copied().collect()
}

pub fn from_array(v: &Array1<Complex64>) -> StateVector {
    v.iter().copied().collect()
}

/// Frobenius norm.
pub fn fro(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Full Hermitian eigendecomposition (LAPACK), reusable across times.
pub struct Spectral {
    lambda: Array1<f64>,
    q: Array2<Complex64>,
}

impl Spectral {
    pub fn new(h: &Array2<Complex64>) -> Self {
        // LAPACK sees row-major input as its transpose, so hand it a
        // column-major copy and verify the result.
        let mut fortran = Array2::zeros(h.raw_dim().f());
        fortran.assign(h);
        let (lambda, q) = fortran.eigh(UPLO::Lower).expect("dense eigendecomposition");
        let scaled = &q * &lambda.mapv(|l| Complex64::new(l, 0.0));
        let residual = fro(&(h.dot(&q) - scaled));
        assert!(
            residual <= 1e-12 * (1.0 + fro(h)) * (h.nrows() as f64).sqrt(),
            "eigendecomposition residual {residual:e}"
        );
        Self { lambda, q }
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.lambda
    }

    /// `exp(−iHt) v`.
    pub fn evolve(&self, v: &StateVector, t: f64) -> StateVector {
        let mut coeffs = self.q.t().mapv(|z| z.conj()).dot(&to_array(v));
        for (c, &l) in coeffs.iter_mut().zip(self.lambda.iter()) {
            *c *= Complex64::from_polar(1.0, -l * t);
        }
        from_array(&self.q.dot(&coeffs))
    }
}

pub fn dense_evolve(h: &Array2<Complex64>, v: &StateVector, t: f64) -> StateVector {
    Spectral::new(h).evolve(v, t)
}

/// `exp(A)` by scaling and squaring of a truncated Taylor series; independent
/// of any eigendecomposition.
pub fn dense_expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let norm = a
        .columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(s));
    let mut result = Array2::eye(n);
    let mut term = Array2::eye(n);
    for k in 1..=30 {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result += &term;
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

/// Random sparse Hermitian matrix with about `fill` nonzeros per row and
/// entries of magnitude below `scale`.
pub fn random_hermitian(
    rng: &mut ChaCha8Rng,
    d: usize,
    fill: usize,
    scale: f64,
) -> SparseHermitian {
    let mut m = std::collections::BTreeMap::new();
    for i in 0..d {
        m.insert((i, i), c(rng.gen_range(-scale..scale), 0.0));
        for _ in 0..fill / 2 {
            let j = rng.gen_range(0..d);
            if j == i {
                continue;
            }
            let z = c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            m.insert((i, j), z);
            m.insert((j, i), z.conj());
        }
    }
    SparseHermitian::from_triplets(d, m.into_iter().map(|((i, j), z)| (i, j, z))).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> StateVector {
    let mut v: StateVector = (0..d)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = v.norm2();
    v.scale_real(1.0 / n);
    v
}

/// Real symmetric tridiagonal matrix as a dense complex matrix.
pub fn tridiagonal(alpha: &[f64], beta: &[f64]) -> Array2<Complex64> {
    let m = alpha.len();
    let mut t = Array2::zeros((m, m));
    for i in 0..m {
        t[[i, i]] = c(alpha[i], 0.0);
        if i + 1 < m {
            t[[i, i + 1]] = c(beta[i], 0.0);
            t[[i + 1, i]] = c(beta[i], 0.0);
        }
    }
    t
}
