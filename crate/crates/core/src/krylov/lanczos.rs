use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{inner, SparseHermitian, StateVector};

/// Tolerance on `‖v‖ − 1` accepted for a Krylov starting vector.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Result of `m` Lanczos steps: `H V = V T + h_next · v_next · e_mᵀ`, with
/// `T` the real symmetric tridiagonal matrix (`alpha`, `beta`).
#[derive(Debug, Clone)]
pub struct KrylovFactorization {
    /// Orthonormal Krylov vectors `v_1 … v_{m_effective}`.
    pub basis: Vec<StateVector>,
    /// Diagonal of `T`.
    pub alpha: Vec<f64>,
    /// Off-diagonal of `T`, length `m_effective - 1`.
    pub beta: Vec<f64>,
    /// Coupling `h_{m+1,m}` to the first vector outside the subspace.
    pub h_next: f64,
    /// Normalized `v_{m+1}`; absent when `h_next` is exactly zero.
    pub next: Option<StateVector>,
    pub breakdown: bool,
}

impl KrylovFactorization {
    pub fn m_effective(&self) -> usize {
        self.alpha.len()
    }

    /// `V · coeffs`.
    pub fn combine(&self, coeffs: &[Complex64]) -> StateVector {
        let dim = self.basis[0].dim();
        let mut out = StateVector::zeros(dim);
        let out_slice = out.as_mut_slice();
        for (v, &c) in self.basis.iter().zip(coeffs) {
            for (o, x) in out_slice.iter_mut().zip(v.iter()) {
                *o += c * x;
            }
        }
        out
    }
}

/// Lanczos recurrence with modified Gram–Schmidt ordering, starting from the
/// normalized vector `v`.
///
/// Stops early ("lucky breakdown") when the residual norm drops below
/// `breakdown_tol`: the Krylov space is then invariant under `H` to that
/// accuracy.
pub fn lanczos_build(
    h: &SparseHermitian,
    v: &StateVector,
    m: usize,
    breakdown_tol: f64,
) -> Result<KrylovFactorization> {
    if h.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: v.dim(),
        });
    }
    if m == 0 {
        return Err(Error::InvalidConfig(
            "Krylov dimension must be at least 1".into(),
        ));
    }
    let norm = v.norm2();
    if !((norm - 1.0).abs() <= NORMALIZATION_TOL) {
        return Err(Error::NotNormalized { norm });
    }

    let m = m.min(h.dim());
    let mut basis = Vec::with_capacity(m);
    let mut alpha = Vec::with_capacity(m);
    let mut beta: Vec<f64> = Vec::with_capacity(m.saturating_sub(1));
    basis.push(v.clone());
    let mut w = StateVector::zeros(h.dim());

    for j in 0..m {
        h.matvec_into(&basis[j], &mut w)?;
        if j > 0 {
            w.axpy_assign(Complex64::new(-beta[j - 1], 0.0), &basis[j - 1])?;
        }
        // Real for Hermitian H; the imaginary part is roundoff.
        let a = inner(&basis[j], &w)?.re;
        if !a.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "non-finite diagonal entry in Lanczos step {}",
                j + 1
            )));
        }
        w.axpy_assign(Complex64::new(-a, 0.0), &basis[j])?;
        alpha.push(a);

        let no = w.norm2();
        if !no.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "non-finite residual norm in Lanczos step {}",
                j + 1
            )));
        }
        let breakdown = no < breakdown_tol;
        if breakdown || j + 1 == m {
            let next = (no > 0.0).then(|| {
                w.scale_real(1.0 / no);
                w
            });
            return Ok(KrylovFactorization {
                basis,
                alpha,
                beta,
                h_next: no,
                next,
                breakdown,
            });
        }
        beta.push(no);
        let mut v_next = w.clone();
        v_next.scale_real(1.0 / no);
        basis.push(v_next);
    }
    unreachable!("loop returns on its last iteration")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pauli_x_spans_full_space() {
        let h = SparseHermitian::from_triplets(2, [(0, 1, c(1.0)), (1, 0, c(1.0))]).unwrap();
        let f = lanczos_build(&h, &StateVector::unit(2, 0), 2, 1e-12).unwrap();
        assert_eq!(f.alpha, vec![0.0, 0.0]);
        assert_eq!(f.beta, vec![1.0]);
        assert_eq!(f.h_next, 0.0);
        assert!(f.breakdown);
        assert_eq!(f.m_effective(), 2);
        assert!(f.next.is_none());
    }

    #[test]
    fn eigenvector_breaks_down_immediately() {
        let h = SparseHermitian::diagonal(&[1.5, -2.0, 0.25]).unwrap();
        let f = lanczos_build(&h, &StateVector::unit(3, 0), 10, 1e-12).unwrap();
        assert_eq!(f.alpha, vec![1.5]);
        assert!(f.beta.is_empty());
        assert!(f.breakdown);
        assert_eq!(f.m_effective(), 1);
    }

    #[test]
    fn krylov_dimension_capped_by_matrix_dimension() {
        let h = SparseHermitian::from_triplets(
            3,
            [
                (0, 0, c(1.0)),
                (0, 1, c(0.5)),
                (1, 0, c(0.5)),
                (1, 2, c(0.25)),
                (2, 1, c(0.25)),
                (2, 2, c(-1.0)),
            ],
        )
        .unwrap();
        let f = lanczos_build(&h, &StateVector::unit(3, 0), 40, 1e-12).unwrap();
        assert_eq!(f.m_effective(), 3);
        assert!(f.h_next < 1e-14);
    }

    #[test]
    fn rejects_unnormalized_start() {
        let h = SparseHermitian::identity(2);
        let mut v = StateVector::unit(2, 0);
        v.scale_real(1.1);
        let err = lanczos_build(&h, &v, 2, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        assert!(lanczos_build(&h, &StateVector::unit(2, 0), 0, 1e-12).is_err());
    }

    #[test]
    fn nan_start_is_a_contract_violation() {
        let h = SparseHermitian::identity(2);
        let v: StateVector = vec![Complex64::new(f64::NAN, 0.0), c(0.0)].into();
        assert!(lanczos_build(&h, &v, 2, 1e-12).is_err());
    }
}
