//! Fixtures shared by the benchmarks.

use tevo_core::{ExampleParams, ExampleSystem};

/// Model with `K = K' = k`, `N_m = k / 2` and `N_0 = N_c = n0`, the family
/// used for runtime-versus-dimension measurements.
pub fn scaled_params(k: usize, n0: u32) -> ExampleParams {
    ExampleParams {
        k,
        k1: k,
        nm: (k / 2) as u32,
        n0,
        nc: n0,
        ..Default::default()
    }
}

pub fn system(params: ExampleParams) -> ExampleSystem {
    ExampleSystem::build(params).expect("benchmark model parameters are valid")
}
