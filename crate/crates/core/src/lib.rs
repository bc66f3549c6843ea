//! Time evolution `v(t) = exp(−iHt) v(0)` for large sparse Hermitian
//! Hamiltonians by restarted Krylov (Lanczos) propagation.
//!
//! Step sizes are chosen from a computable a-posteriori bound on the Krylov
//! error, so the returned state carries a guaranteed error budget (up to
//! floating-point roundoff, which is estimated separately). The crate also
//! lowers second-quantized Hamiltonians written with creation and
//! annihilation operators to sparse matrices over a Fock basis.
//!
//! ```
//! use tevo_core::{evolve, EvolverConfig, SparseHermitian, StateVector};
//! use num_complex::Complex64;
//!
//! let one = Complex64::new(1.0, 0.0);
//! let h = SparseHermitian::from_triplets(2, [(0, 1, one), (1, 0, one)]).unwrap();
//! let cfg = EvolverConfig::new(std::f64::consts::PI, 1e-10);
//! let out = evolve(&h, &StateVector::unit(2, 0), &cfg).unwrap();
//! assert!((out.final_state[0].re + 1.0).abs() < 1e-10);
//! ```

// Input checks are written as `!(x > 0.0)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod example;
pub mod fock;
pub mod krylov;
pub mod linalg;
pub mod operator;
pub mod quadrature;

pub use error::{Error, Result};
pub use example::{
    build_example_hamiltonian, coupling_f, initial_state, number_expectations, ExampleParams,
    ExampleSystem, NumberExpectations,
};
pub use fock::{predicted_dimension, Basis, SectorSpec};
pub use krylov::{
    error_integrand, evolve, evolve_with, find_max_step, lanczos_build, roundoff_estimate,
    small_expm_column, EvolutionResult, EvolutionWarning, EvolverConfig, KrylovFactorization,
    SmallEigen, StepChoice, StepRecord, UNIT_ROUNDOFF,
};
pub use linalg::{axpy, inner, norm2, SparseHermitian, StateVector};
pub use operator::{
    apply_term, build_matrix, hermitian_check, lowered_one_norm, LadderFactor, LadderKind,
    OperatorExpr, OperatorTerm,
};
pub use quadrature::{gauss_legendre_integrate, tanh_sinh_integrate, Integrator, QuadratureReport};

pub use num_complex::Complex64;
