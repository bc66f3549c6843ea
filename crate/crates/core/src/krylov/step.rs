//! Error-bound integrand and step-size selection.
//!
//! For Hermitian `H` the Krylov error after time `t` is bounded by
//! `∫_0^t h_{m+1,m} |e_mᵀ exp(−i T τ) e_1| dτ`. With `T = U Λ Uᵀ` computed once
//! per step, the integrand reduces to a short sum of phases.

use num_complex::Complex64;

use super::tridiag::SmallEigen;
use super::EvolverConfig;
use crate::error::{Error, Result};

/// First trial step when no previous step size is known.
pub const INITIAL_STEP: f64 = 0.1;

/// Factor applied to the previous step size to seed the next search.
pub const STEP_SHRINK: f64 = 0.97;

/// Steps shorter than `MIN_STEP_FRACTION · t_total` are treated as collapse.
pub const MIN_STEP_FRACTION: f64 = 1e-13;

/// `exp(−i T t) e_1 = U · diag(exp(−i λ t)) · Uᵀ e_1`.
pub fn small_expm_column(eig: &SmallEigen, t: f64) -> Vec<Complex64> {
    let m = eig.dim();
    let phases: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(eig.u(0, j), -eig.lambda[j] * t))
        .collect();
    (0..m)
        .map(|k| {
            phases
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (j, p)| {
                    acc + p * eig.u(k, j)
                })
        })
        .collect()
}

/// `τ ↦ h_next · |e_mᵀ exp(−i T τ) e_1|` with the spectral weights
/// `U[m,j]·U[1,j]` precomputed.
#[derive(Debug, Clone)]
pub struct ErrorIntegrand {
    h_next: f64,
    terms: Vec<(f64, f64)>,
}

impl ErrorIntegrand {
    pub fn new(eig: &SmallEigen, h_next: f64) -> Self {
        let last = eig.dim() - 1;
        let terms = (0..eig.dim())
            .map(|j| (eig.lambda[j], eig.u(last, j) * eig.u(0, j)))
            .collect();
        Self { h_next, terms }
    }

    pub fn h_next(&self) -> f64 {
        self.h_next
    }

    pub fn eval(&self, tau: f64) -> f64 {
        if self.h_next == 0.0 {
            return 0.0;
        }
        let (mut re, mut im) = (0.0, 0.0);
        for &(lambda, w) in &self.terms {
            let (s, c) = (lambda * tau).sin_cos();
            re += w * c;
            im -= w * s;
        }
        self.h_next * re.hypot(im)
    }
}

/// Value of the error-bound integrand at `tau`.
pub fn error_integrand(eig: &SmallEigen, h_next: f64, tau: f64) -> f64 {
    ErrorIntegrand::new(eig, h_next).eval(tau)
}

/// Outcome of [`find_max_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepChoice {
    pub t_step: f64,
    /// Bound on the Krylov error committed over `[0, t_step]`.
    pub err_step: f64,
    /// False if any adaptive integration ran out of refinements.
    pub quadrature_converged: bool,
    /// Number of integrals evaluated during the search.
    pub integrals: usize,
}

/// Largest step `t ≤ t_remaining` found by the search for which
/// `∫_0^t f ≤ tol_rate · t`.
///
/// The search seeds from `0.97 · t_prev` (or doubles up from [`INITIAL_STEP`]
/// when there is no previous step), halves until the rate condition holds,
/// and then grows in increments of `t_step / n_substeps` while it still
/// holds. `err_step` is the integral over the accepted interval.
pub fn find_max_step(
    eig: &SmallEigen,
    h_next: f64,
    tol_rate: f64,
    t_prev: Option<f64>,
    t_remaining: f64,
    cfg: &EvolverConfig,
) -> Result<StepChoice> {
    if !(tol_rate > 0.0) || !(t_remaining > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "step search needs tol_rate > 0 and t_remaining > 0 (got {tol_rate}, {t_remaining})"
        )));
    }
    let f = ErrorIntegrand::new(eig, h_next);
    let mut converged = true;
    let mut integrals = 0;
    let mut integrate = |a: f64, b: f64| -> Result<f64> {
        let r = cfg.integrator.integrate(|x| f.eval(x), a, b)?;
        integrals += 1;
        converged &= r.converged;
        Ok(r.value)
    };

    if h_next == 0.0 {
        return Ok(StepChoice {
            t_step: t_remaining,
            err_step: 0.0,
            quadrature_converged: true,
            integrals: 0,
        });
    }

    // |e_mᵀ exp(−iTτ) e_1| ≤ 1, so h_next ≤ tol_rate admits any step.
    if h_next <= tol_rate {
        let err = integrate(0.0, t_remaining)?;
        if err <= tol_rate * t_remaining {
            return Ok(StepChoice {
                t_step: t_remaining,
                err_step: err,
                quadrature_converged: converged,
                integrals,
            });
        }
    }

    let min_step = MIN_STEP_FRACTION * cfg.t_total;
    let mut t = t_prev
        .map_or(INITIAL_STEP, |p| STEP_SHRINK * p)
        .min(t_remaining);
    let mut err = integrate(0.0, t)?;

    if t_prev.is_none() {
        while err <= tol_rate * t && t < t_remaining {
            let doubled = (2.0 * t).min(t_remaining);
            let e = integrate(0.0, doubled)?;
            if e > tol_rate * doubled {
                break;
            }
            t = doubled;
            err = e;
        }
    }

    while err > tol_rate * t {
        t *= 0.5;
        if t < min_step {
            return Err(Error::StepCollapse {
                t_step: t,
                t_remaining,
            });
        }
        err = integrate(0.0, t)?;
    }

    let substep = t / cfg.n_substeps as f64;
    while t < t_remaining {
        let next = (t + substep).min(t_remaining);
        let delta = integrate(t, next)?;
        if err + delta > tol_rate * next {
            break;
        }
        err += delta;
        t = next;
    }

    Ok(StepChoice {
        t_step: t,
        err_step: err,
        quadrature_converged: converged,
        integrals,
    })
}

/// Estimate `d · ‖H‖₁ · eps` of the accumulated floating-point error.
pub fn roundoff_estimate(dim: usize, h_one_norm: f64, eps: f64) -> f64 {
    dim as f64 * h_one_norm * eps
}
