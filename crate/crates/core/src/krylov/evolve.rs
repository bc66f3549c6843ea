use super::lanczos::{lanczos_build, NORMALIZATION_TOL};
use super::step::{find_max_step, roundoff_estimate, small_expm_column};
use super::tridiag::SmallEigen;
use super::{EvolverConfig, UNIT_ROUNDOFF};
use crate::error::{Error, Result};
use crate::linalg::{SparseHermitian, StateVector};

/// Relative slack when deciding whether a sample time `k · sample_step` still
/// lies inside `[0, t_total]`.
const SAMPLE_TIME_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionWarning {
    /// The roundoff estimate exceeds the analytic error bound of a step, so
    /// the bound may be spoiled by finite precision.
    RoundoffExceedsBound {
        step: usize,
        roundoff: f64,
        err_step: f64,
    },
    /// An adaptive error integral did not reach its tolerance.
    QuadratureNotConverged { step: usize },
}

impl std::fmt::Display for EvolutionWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::RoundoffExceedsBound {
                step,
                roundoff,
                err_step,
            } => write!(
                f,
                "ROUNDOFF_EXCEEDS_BOUND: step {step}: roundoff estimate {roundoff:e} exceeds error bound {err_step:e}"
            ),
            Self::QuadratureNotConverged { step } => write!(
                f,
                "QUADRATURE_NOT_CONVERGED: step {step}: error integral did not reach its tolerance"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t_start: f64,
    pub t_step: f64,
    pub err_step: f64,
    /// Dimension of the Krylov space actually built.
    pub krylov_dim: usize,
    pub breakdown: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult<S = StateVector> {
    pub final_state: StateVector,
    /// `(time, observation)` at `0, Δ, 2Δ, …` when `sample_step = Δ > 0`.
    pub samples: Vec<(f64, S)>,
    pub steps: Vec<StepRecord>,
    /// Sum of the per-step error bounds; never above `err_max`.
    pub accumulated_bound: f64,
    pub roundoff_est: f64,
    pub warnings: Vec<EvolutionWarning>,
}

/// Propagates `v0` by `exp(−i H t_total)`, storing sampled states.
pub fn evolve(
    h: &SparseHermitian,
    v0: &StateVector,
    cfg: &EvolverConfig,
) -> Result<EvolutionResult<StateVector>> {
    evolve_with(h, v0, cfg, |_, v| v.clone())
}

/// Like [`evolve`] but maps each sampled state through `observe` instead of
/// storing it, which keeps memory flat for large systems.
pub fn evolve_with<S, F>(
    h: &SparseHermitian,
    v0: &StateVector,
    cfg: &EvolverConfig,
    mut observe: F,
) -> Result<EvolutionResult<S>>
where
    F: FnMut(f64, &StateVector) -> S,
{
    cfg.validate()?;
    if h.dim() != v0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: v0.dim(),
        });
    }
    let norm = v0.norm2();
    if !((norm - 1.0).abs() <= NORMALIZATION_TOL) {
        return Err(Error::NotNormalized { norm });
    }

    let t_total = cfg.t_total;
    let tol_rate = cfg.tol_rate();
    let breakdown_tol = cfg.effective_breakdown_tol();
    let roundoff_est = roundoff_estimate(h.dim(), h.one_norm(), UNIT_ROUNDOFF);

    let sample_time = |k: usize| -> Option<f64> {
        if cfg.sample_step == 0.0 {
            return None;
        }
        let ts = k as f64 * cfg.sample_step;
        (ts <= t_total * (1.0 + SAMPLE_TIME_SLACK)).then(|| ts.min(t_total))
    };

    let mut samples = Vec::new();
    let mut next_sample = 0;
    if sample_time(0).is_some() {
        samples.push((0.0, observe(0.0, v0)));
        next_sample = 1;
    }

    let mut w = v0.clone();
    let mut t_now = 0.0;
    let mut t_prev = None;
    let mut steps = Vec::new();
    let mut warnings = Vec::new();
    let mut accumulated_bound = 0.0;

    while t_now < t_total {
        let step = steps.len();
        let t_remaining = t_total - t_now;
        let krylov = lanczos_build(h, &w, cfg.m, breakdown_tol)?;
        let eig = SmallEigen::from_tridiagonal(&krylov.alpha, &krylov.beta)?;
        let choice = find_max_step(&eig, krylov.h_next, tol_rate, t_prev, t_remaining, cfg)?;

        if !choice.quadrature_converged {
            warnings.push(EvolutionWarning::QuadratureNotConverged { step });
        }
        if roundoff_est > choice.err_step {
            warnings.push(EvolutionWarning::RoundoffExceedsBound {
                step,
                roundoff: roundoff_est,
                err_step: choice.err_step,
            });
        }

        let last = choice.t_step >= t_remaining;
        let t_end = if last { t_total } else { t_now + choice.t_step };
        let advanced = krylov.combine(&small_expm_column(&eig, choice.t_step));

        while let Some(ts) = sample_time(next_sample) {
            if ts > t_end {
                break;
            }
            let obs = if ts == t_end {
                observe(ts, &advanced)
            } else {
                let local = krylov.combine(&small_expm_column(&eig, ts - t_now));
                observe(ts, &local)
            };
            samples.push((ts, obs));
            next_sample += 1;
        }

        steps.push(StepRecord {
            t_start: t_now,
            t_step: choice.t_step,
            err_step: choice.err_step,
            krylov_dim: krylov.m_effective(),
            breakdown: krylov.breakdown,
        });
        accumulated_bound += choice.err_step;
        w = advanced;
        t_prev = Some(choice.t_step);
        t_now = t_end;
    }

    Ok(EvolutionResult {
        final_state: w,
        samples,
        steps,
        accumulated_bound,
        roundoff_est,
        warnings,
    })
}
