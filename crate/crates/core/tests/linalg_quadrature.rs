mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tevo_core::{
    gauss_legendre_integrate, inner, tanh_sinh_integrate, Integrator, SparseHermitian, StateVector,
};

fn complex_vec(len: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), len).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

#[test]
fn matvec_matches_dense_product() {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    for d in [1, 7, 64, 300] {
        let h = random_hermitian(&mut r, d, 10, 3.0);
        let x = random_state(&mut r, d);
        let expect = from_array(&dense(&h).dot(&to_array(&x)));
        let got = h.matvec(&x).unwrap();
        assert!(got.distance(&expect).unwrap() <= 1e-14 * d as f64);
    }
}

#[test]
fn parallel_matvec_matches_dense_product() {
    // Large enough to take the parallel path.
    let mut r = ChaCha8Rng::seed_from_u64(10);
    let d = 20_000;
    let h = random_hermitian(&mut r, d, 4, 1.0);
    let x = random_state(&mut r, d);
    let y = h.matvec(&x).unwrap();
    for i in (0..d).step_by(997) {
        let (cols, vals) = h.row(i);
        let expect: Complex64 = cols.iter().zip(vals).map(|(&j, &z)| z * x[j]).sum();
        assert_eq!(y[i], expect);
    }
}

proptest! {
    #[test]
    fn inner_is_conjugate_symmetric(pair in (1usize..40).prop_flat_map(|n| (complex_vec(n), complex_vec(n)))) {
        let (x, y) = pair;
        let a = inner(&x, &y).unwrap();
        let b = inner(&y, &x).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        let xx = inner(&x, &x).unwrap();
        prop_assert!(xx.im.abs() <= 1e-12 * xx.re.max(1.0));
        prop_assert!((xx.re.sqrt() - x.norm2()).abs() <= 1e-12 * (1.0 + x.norm2()));
    }

    #[test]
    fn one_norm_scales_and_dominates_diagonal(seed in any::<u64>(), d in 1usize..60, alpha in -5.0f64..5.0) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let h: SparseHermitian = random_hermitian(&mut r, d, 6, 2.0);
        let n = h.one_norm();
        prop_assert!((h.scaled(alpha).one_norm() - alpha.abs() * n).abs() <= 1e-13 * (1.0 + n));
        let max_diag = (0..d).map(|i| h.get(i, i).norm()).fold(0.0, f64::max);
        prop_assert!(n >= max_diag);
    }

    #[test]
    fn quadrature_is_linear_and_additive(a in -3.0f64..0.0, mid in 0.0f64..1.0, b in 1.0f64..3.0, k in 0.5f64..4.0) {
        let f = |x: f64| (k * x).cos() + x * x;
        let g = |x: f64| (x / k).exp();
        let ts = |h: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
            tanh_sinh_integrate(h, lo, hi, 1e-10, 15).unwrap().value
        };
        let combined = ts(&|x| 2.0 * f(x) - 3.0 * g(x), a, b);
        let split = 2.0 * ts(&f, a, b) - 3.0 * ts(&g, a, b);
        prop_assert!((combined - split).abs() <= 1e-9 * (1.0 + combined.abs()));
        let whole = ts(&f, a, b);
        let parts = ts(&f, a, mid) + ts(&f, mid, b);
        prop_assert!((whole - parts).abs() <= 1e-9 * (1.0 + whole.abs()));
        let gauss = gauss_legendre_integrate(f, a, b, 30).unwrap();
        prop_assert!((whole - gauss).abs() <= 1e-9 * (1.0 + whole.abs()));
    }
}

#[test]
fn integrator_variants_agree_on_smooth_integrand() {
    let f = |x: f64| (x * 1.7).sin().powi(2) + 0.1;
    let ts = Integrator::default().integrate(f, 0.0, 2.5).unwrap();
    let gl = Integrator::fast_gauss().integrate(f, 0.0, 2.5).unwrap();
    assert!(ts.converged && gl.converged);
    // Closed form: x/2 − sin(2·1.7·x)/(4·1.7) + 0.1·x.
    let exact = 1.25 - (3.4f64 * 2.5).sin() / 6.8 + 0.25;
    assert!((ts.value - exact).abs() <= 1e-3 * exact);
    assert!((gl.value - exact).abs() <= 1e-12 * exact);
}
