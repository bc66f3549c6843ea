//! Second-quantized operators and their lowering to sparse matrices.
//!
//! An [`OperatorExpr`] is a sum of terms `c · F_1 F_2 … F_k`, each factor a
//! creation, annihilation or number operator on one mode. Factors act
//! right to left on normalized number states:
//!
//! * `a |n⟩ = √n |n−1⟩`
//! * `a† |n⟩ = √(n+1) |n+1⟩`, or zero if `n+1` exceeds the mode cap
//! * `n̂ |n⟩ = n |n⟩`

use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::Basis;
use crate::linalg::SparseHermitian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Creation,
    Annihilation,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderFactor {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderFactor {
    pub fn create(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Creation,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Annihilation,
        }
    }

    pub fn number(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Number,
        }
    }

    fn adjoint(self) -> Self {
        let kind = match self.kind {
            LadderKind::Creation => LadderKind::Annihilation,
            LadderKind::Annihilation => LadderKind::Creation,
            LadderKind::Number => LadderKind::Number,
        };
        Self { kind, ..self }
    }
}

/// `coefficient · factors[0] · factors[1] · …`, applied right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub coefficient: Complex64,
    pub factors: Vec<LadderFactor>,
}

impl OperatorTerm {
    pub fn new(coefficient: impl Into<Complex64>, factors: Vec<LadderFactor>) -> Self {
        Self {
            coefficient: coefficient.into(),
            factors,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().rev().map(|f| f.adjoint()).collect(),
        }
    }

    fn max_mode(&self) -> Option<usize> {
        self.factors.iter().map(|f| f.mode).max()
    }
}

/// Sum of operator terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorExpr {
    pub terms: Vec<OperatorTerm>,
}

impl OperatorExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coefficient: impl Into<Complex64>, factors: Vec<LadderFactor>) {
        self.terms.push(OperatorTerm::new(coefficient, factors));
    }

    /// Adds `c · a_to† a_from + conj(c) · a_from† a_to`.
    pub fn push_hopping(&mut self, coefficient: impl Into<Complex64>, to: usize, from: usize) {
        let term = OperatorTerm::new(
            coefficient,
            vec![LadderFactor::create(to), LadderFactor::annihilate(from)],
        );
        let hc = term.adjoint();
        self.terms.push(term);
        self.terms.push(hc);
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(OperatorTerm::adjoint).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;

    fn add(mut self, rhs: OperatorExpr) -> OperatorExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;

    fn neg(self) -> OperatorExpr {
        self * -1.0
    }
}

impl Mul<f64> for OperatorExpr {
    type Output = OperatorExpr;

    fn mul(mut self, rhs: f64) -> OperatorExpr {
        for t in &mut self.terms {
            t.coefficient *= rhs;
        }
        self
    }
}

/// Applies the factors of `term` to `occupations` in place and returns the
/// accumulated real amplitude (without the coefficient), or `None` if the
/// state is annihilated.
fn apply_factors(
    term: &OperatorTerm,
    occupations: &mut [u32],
    caps: &[Option<u32>],
) -> Option<f64> {
    let mut amplitude = 1.0;
    for factor in term.factors.iter().rev() {
        let n = occupations[factor.mode];
        match factor.kind {
            LadderKind::Annihilation => {
                if n == 0 {
                    return None;
                }
                amplitude *= f64::from(n).sqrt();
                occupations[factor.mode] = n - 1;
            }
            LadderKind::Creation => {
                if caps[factor.mode].is_some_and(|cap| n >= cap) {
                    return None;
                }
                let n1 = n.checked_add(1)?;
                amplitude *= f64::from(n1).sqrt();
                occupations[factor.mode] = n1;
            }
            LadderKind::Number => {
                if n == 0 {
                    return None;
                }
                amplitude *= f64::from(n);
            }
        }
    }
    Some(amplitude)
}

/// Applies one term to the number state `state` under the per-mode `caps`.
///
/// Returns the amplitude (including the coefficient) and resulting state, or
/// `None` when the term annihilates the state: an occupation would go below
/// zero, a capped mode would overflow, or a number operator hits an empty
/// mode.
pub fn apply_term(
    term: &OperatorTerm,
    state: &[u32],
    caps: &[Option<u32>],
) -> Option<(Complex64, Vec<u32>)> {
    let mut out = state.to_vec();
    let amp = apply_factors(term, &mut out, caps)?;
    Some((term.coefficient * amp, out))
}

fn check_modes(expr: &OperatorExpr, basis: &Basis) -> Result<()> {
    if let Some(mode) = expr.terms.iter().filter_map(OperatorTerm::max_mode).max() {
        if mode >= basis.mode_count() {
            return Err(Error::InvalidConfig(format!(
                "operator acts on mode {mode} but the basis has {} modes",
                basis.mode_count()
            )));
        }
    }
    Ok(())
}

/// Entries `(row, H[row, col])` of column `col`, sorted by row with duplicate
/// rows merged and exact zeros dropped.
fn column_entries(
    expr: &OperatorExpr,
    basis: &Basis,
    col: usize,
    scratch: &mut Vec<u32>,
    out: &mut Vec<(usize, Complex64)>,
) {
    out.clear();
    let state = basis
        .state_at(col)
        .expect("column index within basis dimension");
    for term in &expr.terms {
        scratch.clear();
        scratch.extend_from_slice(state);
        let Some(amp) = apply_factors(term, scratch, basis.caps()) else {
            continue;
        };
        // Results outside the basis leave the superselection sector.
        if let Some(row) = basis.index_of(scratch) {
            out.push((row, term.coefficient * amp));
        }
    }
    out.sort_by_key(|e| e.0);
    let mut merged = 0;
    for k in 0..out.len() {
        if merged > 0 && out[merged - 1].0 == out[k].0 {
            let z = out[k].1;
            out[merged - 1].1 += z;
        } else {
            out[merged] = out[k];
            merged += 1;
        }
    }
    out.truncate(merged);
    out.retain(|e| e.1 != Complex64::new(0.0, 0.0));
}

/// Lowers `expr` to its matrix in `basis`: `H[i, j] = ⟨i| expr |j⟩`.
///
/// Fails with [`Error::NotHermitian`] if the result is not Hermitian within
/// `8·ε·max|entry|`.
pub fn build_matrix(expr: &OperatorExpr, basis: &Basis) -> Result<SparseHermitian> {
    check_modes(expr, basis)?;
    let dim = basis.dim();
    let columns: Vec<Vec<(usize, Complex64)>> = (0..dim)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(scratch, entries), col| {
                column_entries(expr, basis, col, scratch, entries);
                entries.clone()
            },
        )
        .collect();

    // Row j of the stored matrix is the conjugate of column j of H, i.e. the
    // stored matrix is H†. It equals H exactly when H is Hermitian, which
    // `from_csr` verifies.
    let mut row_ptr = Vec::with_capacity(dim + 1);
    row_ptr.push(0);
    let nnz: usize = columns.iter().map(Vec::len).sum();
    let mut col_idx = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    for column in columns {
        for (row, z) in column {
            col_idx.push(row);
            values.push(z.conj());
        }
        row_ptr.push(col_idx.len());
    }
    SparseHermitian::from_csr(dim, row_ptr, col_idx, values).map_err(|e| match e {
        Error::NotHermitian { row, col } => Error::NotHermitian { row: col, col: row },
        other => other,
    })
}

/// Whether `expr` lowers to a Hermitian matrix in `basis`.
pub fn hermitian_check(expr: &OperatorExpr, basis: &Basis) -> bool {
    build_matrix(expr, basis).is_ok()
}

/// Induced 1-norm of the lowered matrix, computed column by column without
/// storing the matrix.
pub fn lowered_one_norm(expr: &OperatorExpr, basis: &Basis) -> Result<f64> {
    check_modes(expr, basis)?;
    let norm = (0..basis.dim())
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(scratch, entries), col| {
                column_entries(expr, basis, col, scratch, entries);
                entries.iter().map(|e| e.1.norm()).sum::<f64>()
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(norm)
}

/// Largest number of stored entries in any column of the lowered matrix.
pub fn max_column_nnz(expr: &OperatorExpr, basis: &Basis) -> Result<usize> {
    check_modes(expr, basis)?;
    Ok((0..basis.dim())
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(scratch, entries), col| {
                column_entries(expr, basis, col, scratch, entries);
                entries.len()
            },
        )
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::SectorSpec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn number_operator_is_diagonal() {
        let t = OperatorTerm::new(1.0, vec![LadderFactor::number(0)]);
        let (amp, s) = apply_term(&t, &[3], &[None]).unwrap();
        assert_eq!(amp, c(3.0));
        assert_eq!(s, vec![3]);
    }

    #[test]
    fn vacuum_annihilation() {
        let t = OperatorTerm::new(1.0, vec![LadderFactor::annihilate(0)]);
        assert_eq!(apply_term(&t, &[0], &[None]), None);
    }

    #[test]
    fn hopping_and_cap() {
        let hop = OperatorTerm::new(
            1.0,
            vec![LadderFactor::create(0), LadderFactor::annihilate(1)],
        );
        let (amp, s) = apply_term(&hop, &[0, 1], &[None, None]).unwrap();
        assert_eq!(amp, c(1.0));
        assert_eq!(s, vec![1, 0]);
        let create = OperatorTerm::new(1.0, vec![LadderFactor::create(0)]);
        assert_eq!(apply_term(&create, &[1], &[Some(1)]), None);
        let (amp, _) = apply_term(&create, &[1], &[None]).unwrap();
        assert!((amp.re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn factors_apply_right_to_left() {
        // a a† |0⟩ = |0⟩ but a† a |0⟩ = 0
        let aad = OperatorTerm::new(
            1.0,
            vec![LadderFactor::annihilate(0), LadderFactor::create(0)],
        );
        let ada = OperatorTerm::new(
            1.0,
            vec![LadderFactor::create(0), LadderFactor::annihilate(0)],
        );
        assert_eq!(apply_term(&aad, &[0], &[None]), Some((c(1.0), vec![0])));
        assert_eq!(apply_term(&ada, &[0], &[None]), None);
    }

    #[test]
    fn commutator_on_interior_states() {
        let aad = OperatorTerm::new(
            1.0,
            vec![LadderFactor::annihilate(0), LadderFactor::create(0)],
        );
        let ada = OperatorTerm::new(
            1.0,
            vec![LadderFactor::create(0), LadderFactor::annihilate(0)],
        );
        for n in 1..50u32 {
            let (x, sx) = apply_term(&aad, &[n], &[None]).unwrap();
            let (y, sy) = apply_term(&ada, &[n], &[None]).unwrap();
            assert_eq!(sx, sy);
            assert!((x - y - c(1.0)).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn two_level_hopper() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(2, 1)]).unwrap();
        let mut expr = OperatorExpr::new();
        expr.push_hopping(1.0, 0, 1);
        let h = build_matrix(&expr, &basis).unwrap();
        assert_eq!(
            h.to_dense(),
            vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]
        );
    }

    #[test]
    fn diagonal_operator_follows_basis_order() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(2, 1)]).unwrap();
        let mut expr = OperatorExpr::new();
        expr.push(2.5, vec![LadderFactor::number(0)]);
        let h = build_matrix(&expr, &basis).unwrap();
        // basis order: (0,1), (1,0)
        assert_eq!(h.get(0, 0), c(0.0));
        assert_eq!(h.get(1, 1), c(2.5));
        assert_eq!(h.nnz(), 1);
    }

    #[test]
    fn missing_hermitian_conjugate_is_detected() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(2, 1)]).unwrap();
        let mut expr = OperatorExpr::new();
        expr.push(
            1.0,
            vec![LadderFactor::create(0), LadderFactor::annihilate(1)],
        );
        assert!(!hermitian_check(&expr, &basis));
        // basis (0,1) -> index 0, (1,0) -> index 1: H[1, 0] = 1 with no partner
        let err = build_matrix(&expr, &basis).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
        let sym = expr.clone() + expr.adjoint();
        assert!(hermitian_check(&sym, &basis));
    }

    #[test]
    fn complex_coefficients_need_conjugates() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(2, 2)]).unwrap();
        let mut expr = OperatorExpr::new();
        expr.push_hopping(Complex64::new(0.3, -0.8), 0, 1);
        let h = build_matrix(&expr, &basis).unwrap();
        let d = h.to_dense();
        for (i, row) in d.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                assert_eq!(*z, d[j][i].conj());
            }
        }
        let mut bad = OperatorExpr::new();
        bad.push(Complex64::new(0.0, 1.0), vec![LadderFactor::number(0)]);
        assert!(!hermitian_check(&bad, &basis));
    }

    #[test]
    fn out_of_range_mode_is_rejected() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(2, 1)]).unwrap();
        let mut expr = OperatorExpr::new();
        expr.push(1.0, vec![LadderFactor::number(5)]);
        assert!(matches!(
            build_matrix(&expr, &basis),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn streaming_norm_matches_built_matrix() {
        let basis = Basis::enumerate(&[SectorSpec::bosonic(3, 4)]).unwrap();
        let mut expr = OperatorExpr::new();
        expr.push_hopping(0.7, 0, 1);
        expr.push_hopping(-1.3, 1, 2);
        expr.push(0.4, vec![LadderFactor::number(2), LadderFactor::number(0)]);
        let h = build_matrix(&expr, &basis).unwrap();
        let streamed = lowered_one_norm(&expr, &basis).unwrap();
        assert!((h.one_norm() - streamed).abs() <= 1e-14 * streamed);
        assert!(max_column_nnz(&expr, &basis).unwrap() <= expr.len());
    }
}
