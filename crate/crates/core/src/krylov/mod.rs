//! Krylov subspace propagation of `v(t) = exp(−iHt) v(0)` for sparse
//! Hermitian `H`, with step sizes chosen so that a rigorous a-posteriori bound
//! on the Krylov error stays within a user budget.
//!
//! Each step builds a Lanczos factorization of dimension `m` from the current
//! state, diagonalizes the small tridiagonal matrix once, picks the longest
//! step whose error integral stays below `tol_rate · t_step` (with
//! `tol_rate = err_max / t_total`) and advances the state inside the subspace.
//! Summed over steps the charged errors therefore never exceed `err_max`.

mod evolve;
mod lanczos;
mod step;
mod tridiag;

pub use evolve::{evolve, evolve_with, EvolutionResult, EvolutionWarning, StepRecord};
pub use lanczos::{lanczos_build, KrylovFactorization, NORMALIZATION_TOL};
pub use step::{
    error_integrand, find_max_step, roundoff_estimate, small_expm_column, ErrorIntegrand,
    StepChoice, INITIAL_STEP, MIN_STEP_FRACTION, STEP_SHRINK,
};
pub use tridiag::SmallEigen;

use crate::error::{Error, Result};
use crate::quadrature::Integrator;

pub const DEFAULT_KRYLOV_DIM: usize = 40;
pub const DEFAULT_SUBSTEPS: usize = 10;

/// Unit roundoff of binary64 used by the roundoff estimate.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON;

/// Smallest breakdown threshold ever used.
pub const MIN_BREAKDOWN_TOL: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolverConfig {
    /// Krylov dimension.
    pub m: usize,
    /// Budget for the 2-norm error of the final state.
    pub err_max: f64,
    pub t_total: f64,
    /// Interval between recorded samples; `0` records nothing.
    pub sample_step: f64,
    pub integrator: Integrator,
    pub n_substeps: usize,
    /// Residual norm below which the Lanczos recurrence stops early. Defaults
    /// to `tol_rate`.
    pub breakdown_tol: Option<f64>,
}

impl EvolverConfig {
    pub fn new(t_total: f64, err_max: f64) -> Self {
        Self {
            m: DEFAULT_KRYLOV_DIM,
            err_max,
            t_total,
            sample_step: 0.0,
            integrator: Integrator::default(),
            n_substeps: DEFAULT_SUBSTEPS,
            breakdown_tol: None,
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_sample_step(mut self, sample_step: f64) -> Self {
        self.sample_step = sample_step;
        self
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn tol_rate(&self) -> f64 {
        self.err_max / self.t_total
    }

    pub fn effective_breakdown_tol(&self) -> f64 {
        self.breakdown_tol
            .unwrap_or_else(|| self.tol_rate())
            .max(MIN_BREAKDOWN_TOL)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m < 1 {
            return fail("Krylov dimension m must be at least 1".into());
        }
        if !(self.err_max > 0.0 && self.err_max.is_finite()) {
            return fail(format!("err_max must be positive, got {}", self.err_max));
        }
        if !(self.t_total > 0.0 && self.t_total.is_finite()) {
            return fail(format!("t_total must be positive, got {}", self.t_total));
        }
        if !(self.sample_step >= 0.0 && self.sample_step.is_finite()) {
            return fail(format!(
                "sample_step must be non-negative, got {}",
                self.sample_step
            ));
        }
        if self.n_substeps < 1 {
            return fail("n_substeps must be at least 1".into());
        }
        if let Some(tol) = self.breakdown_tol {
            if !(tol >= 0.0) {
                return fail(format!("breakdown_tol must be non-negative, got {tol}"));
            }
        }
        Ok(())
    }
}
