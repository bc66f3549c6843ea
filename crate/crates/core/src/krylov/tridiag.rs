//! Eigendecomposition of the small real symmetric tridiagonal matrix produced
//! by the Lanczos recurrence (implicit QL with Wilkinson-type shifts).

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Spectral data `T = U · diag(lambda) · Uᵀ` of a symmetric tridiagonal `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallEigen {
    /// Eigenvalues in ascending order.
    pub lambda: Vec<f64>,
    /// Orthogonal eigenvector matrix, row-major, column `j` belongs to `lambda[j]`.
    pub vectors: Vec<f64>,
}

impl SmallEigen {
    /// Diagonalizes the tridiagonal matrix with diagonal `alpha` and
    /// off-diagonal `beta` (`beta.len() + 1 == alpha.len()`).
    pub fn from_tridiagonal(alpha: &[f64], beta: &[f64]) -> Result<Self> {
        let n = alpha.len();
        if n == 0 || beta.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                actual: beta.len(),
            });
        }
        if alpha.iter().chain(beta).any(|x| !x.is_finite()) {
            return Err(Error::NumericalFailure(
                "non-finite entry in tridiagonal matrix".into(),
            ));
        }

        let mut d = alpha.to_vec();
        let mut e = beta.to_vec();
        e.push(0.0);
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }

        for l in 0..n {
            let mut sweeps = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                sweeps += 1;
                if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NumericalFailure(
                        "tridiagonal QL iteration did not converge".into(),
                    ));
                }

                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut deflated = false;
                let mut i = m;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for k in 0..n {
                        let zk = &mut z[k * n..(k + 1) * n];
                        let f = zk[i + 1];
                        zk[i + 1] = s * zk[i] + c * f;
                        zk[i] = c * zk[i] - s * f;
                    }
                }
                if deflated {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        // Sort ascending; ties keep their original order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let lambda = order.iter().map(|&j| d[j]).collect();
        let mut vectors = vec![0.0; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                vectors[row * n + new_col] = z[row * n + old_col];
            }
        }
        Ok(Self { lambda, vectors })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// `U[row, col]`.
    pub fn u(&self, row: usize, col: usize) -> f64 {
        self.vectors[row * self.dim() + col]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(eig: &SmallEigen, alpha: &[f64], beta: &[f64]) -> f64 {
        let n = alpha.len();
        let t = |i: usize, j: usize| -> f64 {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        };
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let tu: f64 = (0..n).map(|k| t(i, k) * eig.u(k, j)).sum();
                worst = worst.max((tu - eig.u(i, j) * eig.lambda[j]).abs());
            }
        }
        worst
    }

    #[test]
    fn one_by_one() {
        let eig = SmallEigen::from_tridiagonal(&[2.5], &[]).unwrap();
        assert_eq!(eig.lambda, vec![2.5]);
        assert_eq!(eig.vectors, vec![1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let eig = SmallEigen::from_tridiagonal(&[0.0, 0.0], &[1.0]).unwrap();
        assert!((eig.lambda[0] + 1.0).abs() < 1e-15);
        assert!((eig.lambda[1] - 1.0).abs() < 1e-15);
        assert!(reconstruct(&eig, &[0.0, 0.0], &[1.0]) < 1e-15);
    }

    #[test]
    fn residual_and_orthogonality() {
        let n = 25;
        let alpha: Vec<f64> = (0..n).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
        let beta: Vec<f64> = (0..n - 1).map(|i| 0.5 + ((i * 3 % 5) as f64)).collect();
        let eig = SmallEigen::from_tridiagonal(&alpha, &beta).unwrap();
        let max_t = alpha
            .iter()
            .chain(&beta)
            .fold(0.0f64, |a, x| a.max(x.abs()));
        assert!(reconstruct(&eig, &alpha, &beta) <= 100.0 * f64::EPSILON * n as f64 * max_t);
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|k| eig.u(k, a) * eig.u(k, b)).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13);
            }
        }
        assert!(eig.lambda.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(SmallEigen::from_tridiagonal(&[1.0, 2.0], &[]).is_err());
        assert!(SmallEigen::from_tridiagonal(&[], &[]).is_err());
        assert!(matches!(
            SmallEigen::from_tridiagonal(&[1.0, f64::NAN], &[1.0]),
            Err(Error::NumericalFailure(_))
        ));
    }
}
