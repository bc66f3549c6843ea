//! Two-sector memory-burden model used as the reference workload.
//!
//! Modes are laid out as `[a_0, b_0, a_1 … a_K, a'_1 … a'_K']`. The first two
//! are bosonic and share the total `N_0`; the remaining `K + K'` are qubits
//! sharing the total `N_m`. The Hamiltonian is
//!
//! ```text
//! H = C_0 (a_0† b_0 + h.c.)
//!   + ε_m (1 − n_0 / N_c) Σ_k n_k
//!   + ε_m (1 − n_0 / (N_c − ΔN_c)) Σ_k' n'_k'
//!   + C_m { Σ_{k,k'} f_1(k,k') (a_k† a'_k' + h.c.)
//!         + Σ_{l>k} f_2(k,l) (a_k† a_l + h.c.)
//!         + Σ_{l'>k'} f_3(k',l') (a'_k'† a'_l' + h.c.) }
//! ```
//!
//! Both sector totals commute with every term.

use crate::error::{Error, Result};
use crate::fock::{Basis, SectorSpec};
use crate::linalg::{SparseHermitian, StateVector};
use crate::operator::{build_matrix, LadderFactor, OperatorExpr};

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleParams {
    pub eps_m: f64,
    pub c0: f64,
    pub cm: f64,
    /// Initial occupation of `a_0`, and the total of the bosonic sector.
    pub n0: u32,
    pub nc: u32,
    pub dnc: u32,
    /// Number of `a_k` qubits.
    pub k: usize,
    /// Number of `a'_k'` qubits.
    pub k1: usize,
    /// Number of occupied qubits.
    pub nm: u32,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            eps_m: 20f64.sqrt(),
            c0: 1.0,
            cm: 1.0,
            n0: 20,
            nc: 20,
            dnc: 12,
            k: 4,
            k1: 4,
            nm: 2,
        }
    }
}

impl ExampleParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.nc == 0 {
            return fail("Nc must be positive");
        }
        if self.dnc == 0 || self.dnc >= self.nc {
            return fail("dNc must satisfy 0 < dNc < Nc");
        }
        if self.k == 0 || self.k1 == 0 {
            return fail("K and K1 must be positive");
        }
        if !(self.eps_m.is_finite() && self.c0.is_finite() && self.cm.is_finite()) {
            return fail("couplings must be finite");
        }
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        2 + self.k + self.k1
    }

    /// Global index of `a_k`, `k = 1..=K`.
    pub fn a_mode(&self, k: usize) -> usize {
        1 + k
    }

    /// Global index of `a'_k'`, `k' = 1..=K'`.
    pub fn a_prime_mode(&self, k1: usize) -> usize {
        1 + self.k + k1
    }

    pub fn sectors(&self) -> Vec<SectorSpec> {
        vec![
            SectorSpec::bosonic(2, self.n0),
            SectorSpec::qubits(self.k + self.k1, self.nm),
        ]
    }

    /// Basis dimension from the counting formula, without enumeration.
    pub fn dimension(&self) -> Result<usize> {
        self.validate()?;
        crate::fock::predicted_dimension(&self.sectors())
    }
}

/// Pseudo-random coupling `f_i(k, l)` with values in `[-0.5, 0) ∪ [0.5, 1)`.
///
/// `F = (√2 (k + Δk_i)³ + √7 (l + Δl_i)⁵) mod 1`, returned as `F − 1` when
/// `F < 0.5`. The offsets are `Δk = (1, 1, K+1)` and `Δl = (K+1, 1, K+1)` for
/// `i = 1, 2, 3`.
///
/// Evaluated in binary64: for large arguments the fractional part keeps only
/// about `16 − log10(√7 (l + Δl)⁵)` correct digits.
pub fn coupling_f(i: u8, k: usize, l: usize, big_k: usize) -> f64 {
    let (dk, dl) = match i {
        1 => (1, big_k + 1),
        2 => (1, 1),
        3 => (big_k + 1, big_k + 1),
        _ => panic!("coupling index must be 1, 2 or 3, got {i}"),
    };
    let a = (k + dk) as f64;
    let b = (l + dl) as f64;
    let f = (2f64.sqrt() * a.powi(3) + 7f64.sqrt() * b.powi(5)).rem_euclid(1.0);
    if f < 0.5 {
        f - 1.0
    } else {
        f
    }
}

/// Operator expression and basis of the model.
pub fn build_example_hamiltonian(p: &ExampleParams) -> Result<(OperatorExpr, Basis)> {
    p.validate()?;
    let basis = Basis::enumerate(&p.sectors())?;
    Ok((example_expr(p), basis))
}

/// The operator expression alone; the basis is not needed to write it down.
pub fn example_expr(p: &ExampleParams) -> OperatorExpr {
    use LadderFactor as F;

    let mut h = OperatorExpr::new();
    h.push_hopping(p.c0, 0, 1);

    let shift_a = -p.eps_m / f64::from(p.nc);
    let shift_ap = -p.eps_m / f64::from(p.nc - p.dnc);
    for k in 1..=p.k {
        let mode = p.a_mode(k);
        h.push(p.eps_m, vec![F::number(mode)]);
        h.push(shift_a, vec![F::number(0), F::number(mode)]);
    }
    for k1 in 1..=p.k1 {
        let mode = p.a_prime_mode(k1);
        h.push(p.eps_m, vec![F::number(mode)]);
        h.push(shift_ap, vec![F::number(0), F::number(mode)]);
    }

    for k in 1..=p.k {
        for k1 in 1..=p.k1 {
            let f = coupling_f(1, k, k1, p.k);
            h.push_hopping(p.cm * f, p.a_mode(k), p.a_prime_mode(k1));
        }
    }
    for k in 1..=p.k {
        for l in k + 1..=p.k {
            let f = coupling_f(2, k, l, p.k);
            h.push_hopping(p.cm * f, p.a_mode(k), p.a_mode(l));
        }
    }
    for k1 in 1..=p.k1 {
        for l1 in k1 + 1..=p.k1 {
            let f = coupling_f(3, k1, l1, p.k);
            h.push_hopping(p.cm * f, p.a_prime_mode(k1), p.a_prime_mode(l1));
        }
    }
    h
}

/// Lowered model: parameters, basis, expression and matrix together.
#[derive(Debug, Clone)]
pub struct ExampleSystem {
    pub params: ExampleParams,
    pub basis: Basis,
    pub expr: OperatorExpr,
    pub hamiltonian: SparseHermitian,
}

impl ExampleSystem {
    pub fn build(params: ExampleParams) -> Result<Self> {
        let (expr, basis) = build_example_hamiltonian(&params)?;
        let hamiltonian = build_matrix(&expr, &basis)?;
        Ok(Self {
            params,
            basis,
            expr,
            hamiltonian,
        })
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        initial_state(&self.params, &self.basis)
    }
}

/// `|N_0, 0, 1 … 1, 0 … 0⟩` with the first `N_m` qubits occupied.
pub fn initial_state(p: &ExampleParams, basis: &Basis) -> Result<StateVector> {
    let mut occ = vec![0u32; p.mode_count()];
    occ[0] = p.n0;
    for slot in occ.iter_mut().skip(2).take(p.nm as usize) {
        *slot = 1;
    }
    let index = basis.index_of(&occ).ok_or(Error::StateNotInBasis(occ))?;
    Ok(StateVector::unit(basis.dim(), index))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumberExpectations {
    /// `⟨n̂_l⟩` for every mode in basis order.
    pub per_mode: Vec<f64>,
    /// Sum of `per_mode` over each sector.
    pub sector_sums: Vec<f64>,
}

/// `⟨v| n̂_l |v⟩` for every mode, plus per-sector totals.
pub fn number_expectations(v: &StateVector, basis: &Basis) -> Result<NumberExpectations> {
    if v.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: v.dim(),
        });
    }
    let mut per_mode = vec![0.0; basis.mode_count()];
    for (z, occ) in v.iter().zip(basis.states()) {
        let p = z.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (acc, &n) in per_mode.iter_mut().zip(occ) {
            *acc += p * f64::from(n);
        }
    }
    let sector_sums = (0..basis.sectors().len())
        .map(|s| basis.sector_modes(s).map(|l| per_mode[l]).sum())
        .collect();
    Ok(NumberExpectations {
        per_mode,
        sector_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn default_dimension() {
        assert_eq!(ExampleParams::default().dimension().unwrap(), 588);
    }

    #[test]
    fn benchmark_dimensions() {
        let p = ExampleParams {
            k: 10,
            k1: 10,
            nm: 5,
            n0: 100,
            nc: 100,
            ..Default::default()
        };
        assert_eq!(p.dimension().unwrap(), 1_565_904);
        let p = ExampleParams {
            n0: 139,
            nc: 139,
            ..p
        };
        assert_eq!(p.dimension().unwrap(), 2_170_560);
    }

    #[test]
    fn invalid_params() {
        let bad = [
            ExampleParams {
                nc: 0,
                ..Default::default()
            },
            ExampleParams {
                dnc: 20,
                ..Default::default()
            },
            ExampleParams {
                dnc: 0,
                ..Default::default()
            },
            ExampleParams {
                k: 0,
                ..Default::default()
            },
            ExampleParams {
                k1: 0,
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
        let overfull = ExampleParams {
            nm: 9,
            ..Default::default()
        };
        assert!(build_example_hamiltonian(&overfull).is_err());
    }

    #[test]
    fn coupling_magnitude_range() {
        for i in 1..=3 {
            for k in 1..=10 {
                for l in 1..=10 {
                    let f = coupling_f(i, k, l, 10);
                    assert!((0.5..=1.0).contains(&f.abs()), "f{i}({k},{l}) = {f}");
                }
            }
        }
    }

    #[test]
    fn initial_state_observables() {
        let sys = ExampleSystem::build(ExampleParams::default()).unwrap();
        let v = sys.initial_state().unwrap();
        assert_eq!(v.norm2(), 1.0);
        let obs = number_expectations(&v, &sys.basis).unwrap();
        assert_eq!(
            obs.per_mode,
            vec![20.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(obs.sector_sums, vec![20.0, 2.0]);
    }

    #[test]
    fn uniform_superposition_expectations() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(2, 1)]).unwrap();
        let a = Complex64::new(0.5f64.sqrt(), 0.0);
        let v: StateVector = vec![a, a].into();
        let obs = number_expectations(&v, &basis).unwrap();
        for x in obs.per_mode {
            assert!((x - 0.5).abs() < 1e-15);
        }
        assert!(number_expectations(&StateVector::zeros(3), &basis).is_err());
    }
}
