//! Fock-space state representation for spinless fermionic modes with
//! Jordan-Wigner sign bookkeeping, plus the dense exact-diagonalization
//! oracle used by the rest of the crate.
//!
//! Occupations are stored little-endian in a `u64`: mode `j` lives in bit
//! `j`. The basis order is ascending in that packed word, which makes the
//! single-occupied-mode states appear as |100..>, |010..>, ... in mode
//! order. A ladder operator on mode `j` picks up the parity sign
//! (-1)^(number of occupied modes with index < j).

use crate::error::CoreError;
use crate::linalg;
use crate::C64;
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use std::sync::Arc;

/// Hard cap on the number of modes for the packed representation.
pub const MAX_MODES: usize = 24;
/// Hard cap on basis dimension.
pub const MAX_DIM: usize = 2_000_000;
/// Default cap for dense operator matrices.
pub const DENSE_LIMIT: usize = 4096;

/// Ordered basis of occupation bitstrings, either the full 2^L space or a
/// fixed particle-number sector.
#[derive(Debug, Clone)]
pub struct FockBasis {
    mode_count: usize,
    particle_number: Option<usize>,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

impl FockBasis {
    /// Build the fixed-N sector (`particle_number = Some(N)`) or the full
    /// space (`None`).
    pub fn build(mode_count: usize, particle_number: Option<usize>) -> Result<Arc<Self>, CoreError> {
        if mode_count == 0 || mode_count > MAX_MODES {
            return Err(CoreError::InvalidBasis {
                mode_count,
                particle_number,
            });
        }
        if let Some(n) = particle_number {
            if n > mode_count {
                return Err(CoreError::InvalidBasis {
                    mode_count,
                    particle_number,
                });
            }
        }
        let dim = match particle_number {
            Some(n) => binomial(mode_count, n),
            None => 1usize << mode_count,
        };
        if dim > MAX_DIM {
            return Err(CoreError::DimensionLimit {
                dim,
                limit: MAX_DIM,
            });
        }
        let mut states = Vec::with_capacity(dim);
        match particle_number {
            None => states.extend(0..(1u64 << mode_count)),
            Some(n) => {
                for mask in 0..(1u64 << mode_count) {
                    if mask.count_ones() as usize == n {
                        states.push(mask);
                    }
                }
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect::<HashMap<_, _>>();
        Ok(Arc::new(FockBasis {
            mode_count,
            particle_number,
            states,
            index,
        }))
    }

    pub fn full(mode_count: usize) -> Result<Arc<Self>, CoreError> {
        Self::build(mode_count, None)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn particle_number(&self) -> Option<usize> {
        self.particle_number
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> u64 {
        self.states[i]
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Render a packed state as the occupation string n_1 n_2 ... n_L.
    pub fn format_state(&self, mask: u64) -> String {
        (0..self.mode_count)
            .map(|j| if (mask >> j) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parse an occupation string in mode order into a packed state.
    pub fn parse_state(&self, s: &str) -> Result<u64, CoreError> {
        if s.len() != self.mode_count {
            return Err(CoreError::Invalid(format!(
                "occupation string length {} != mode count {}",
                s.len(),
                self.mode_count
            )));
        }
        let mut mask = 0u64;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '1' => mask |= 1 << j,
                '0' => {}
                _ => return Err(CoreError::Invalid(format!("bad occupation char {ch:?}"))),
            }
        }
        Ok(mask)
    }
}

/// Jordan-Wigner parity sign for a ladder operator acting on `mode`:
/// (-1)^(number of occupied modes below `mode`).
#[inline]
pub fn jw_sign(mask: u64, mode: usize) -> f64 {
    if (mask & ((1u64 << mode) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A normal-ordered product of creation and annihilation operators with a
/// coefficient: coeff * c†_{i1} ... c†_{ip} c_{j1} ... c_{jq}.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    creations: Vec<usize>,
    annihilations: Vec<usize>,
    coefficient: C64,
}

impl LadderTerm {
    pub fn new(
        creations: Vec<usize>,
        annihilations: Vec<usize>,
        coefficient: C64,
    ) -> Result<Self, CoreError> {
        for list in [&creations, &annihilations] {
            for (n, &i) in list.iter().enumerate() {
                if list[..n].contains(&i) {
                    return Err(CoreError::RepeatedIndex { index: i });
                }
            }
        }
        Ok(LadderTerm {
            creations,
            annihilations,
            coefficient,
        })
    }

    /// One-body term coeff * c†_i c_j.
    pub fn one_body(i: usize, j: usize, coefficient: C64) -> Self {
        LadderTerm {
            creations: vec![i],
            annihilations: vec![j],
            coefficient,
        }
    }

    /// Two-body term coeff * c†_i c†_j c_k c_l.
    pub fn two_body(i: usize, j: usize, k: usize, l: usize, coefficient: C64) -> Result<Self, CoreError> {
        Self::new(vec![i, j], vec![k, l], coefficient)
    }

    /// Number operator n_i.
    pub fn number(i: usize) -> Self {
        Self::one_body(i, i, C64::from(1.0))
    }

    pub fn coefficient(&self) -> C64 {
        self.coefficient
    }

    pub fn creations(&self) -> &[usize] {
        &self.creations
    }

    pub fn annihilations(&self) -> &[usize] {
        &self.annihilations
    }

    pub fn particle_delta(&self) -> i64 {
        self.creations.len() as i64 - self.annihilations.len() as i64
    }

    pub fn max_index(&self) -> Option<usize> {
        self.creations.iter().chain(&self.annihilations).copied().max()
    }

    /// Hermitian conjugate term.
    pub fn adjoint(&self) -> Self {
        LadderTerm {
            creations: self.annihilations.iter().rev().copied().collect(),
            annihilations: self.creations.iter().rev().copied().collect(),
            coefficient: self.coefficient.conj(),
        }
    }

    /// Apply to a packed occupation state. Returns the resulting state and
    /// the accumulated JW sign, or None if the term annihilates the state.
    /// The rightmost operator in the product acts first.
    pub fn apply_to_mask(&self, mask: u64) -> Option<(u64, f64)> {
        let mut m = mask;
        let mut sign = 1.0;
        for &j in self.annihilations.iter().rev() {
            if (m >> j) & 1 == 0 {
                return None;
            }
            sign *= jw_sign(m, j);
            m ^= 1 << j;
        }
        for &i in self.creations.iter().rev() {
            if (m >> i) & 1 == 1 {
                return None;
            }
            sign *= jw_sign(m, i);
            m ^= 1 << i;
        }
        Some((m, sign))
    }
}

/// Complex amplitudes over a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let dim = basis.dim();
        StateVector {
            basis,
            amplitudes: vec![C64::from(0.0); dim],
        }
    }

    /// Basis state |mask>.
    pub fn basis_state(basis: Arc<FockBasis>, mask: u64) -> Result<Self, CoreError> {
        let idx = basis
            .index_of(mask)
            .ok_or_else(|| CoreError::Invalid(format!("state {mask:#b} not in basis")))?;
        let mut sv = Self::zero(basis);
        sv.amplitudes[idx] = C64::from(1.0);
        Ok(sv)
    }

    pub fn from_amplitudes(basis: Arc<FockBasis>, amplitudes: Vec<C64>) -> Result<Self, CoreError> {
        if amplitudes.len() != basis.dim() {
            return Err(CoreError::ParameterLength {
                got: amplitudes.len(),
                expected: basis.dim(),
            });
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.amplitudes {
                *z /= n;
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Exact action of a ladder term on a state. The result is unnormalized.
/// Fails with `SectorMismatch` when the basis is a fixed sector and the
/// term changes particle number.
pub fn apply_ladder(term: &LadderTerm, state: &StateVector) -> Result<StateVector, CoreError> {
    let basis = state.basis();
    if let Some(i) = term.max_index() {
        if i >= basis.mode_count() {
            return Err(CoreError::ModeOutOfRange {
                index: i,
                mode_count: basis.mode_count(),
            });
        }
    }
    let delta = term.particle_delta();
    if basis.particle_number().is_some() && delta != 0 {
        return Err(CoreError::SectorMismatch { delta });
    }
    let mut out = StateVector::zero(Arc::clone(basis));
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        if amp == C64::from(0.0) {
            continue;
        }
        if let Some((m, sign)) = term.apply_to_mask(basis.state(idx)) {
            let tgt = basis
                .index_of(m)
                .expect("number-conserving image must stay in sector");
            out.amplitudes[tgt] += term.coefficient() * sign * amp;
        }
    }
    Ok(out)
}

/// Accumulate `sum_terms ⟨ψ| T |ψ⟩`-style applications without building a
/// matrix: returns `(sum of terms) |ψ⟩`.
pub fn apply_terms(terms: &[LadderTerm], state: &StateVector) -> Result<StateVector, CoreError> {
    let mut out = StateVector::zero(Arc::clone(state.basis()));
    for t in terms {
        let part = apply_ladder(t, state)?;
        for (o, p) in out.amplitudes.iter_mut().zip(part.amplitudes()) {
            *o += p;
        }
    }
    Ok(out)
}

/// Dense matrix of a sum of ladder terms over a basis. The caller is
/// responsible for supplying a Hermitian-closed term set when a Hermitian
/// operator is intended.
pub fn dense_matrix(terms: &[LadderTerm], basis: &Arc<FockBasis>) -> Result<DMatrix<C64>, CoreError> {
    dense_matrix_with_limit(terms, basis, DENSE_LIMIT)
}

pub fn dense_matrix_with_limit(
    terms: &[LadderTerm],
    basis: &Arc<FockBasis>,
    limit: usize,
) -> Result<DMatrix<C64>, CoreError> {
    let dim = basis.dim();
    if dim > limit {
        return Err(CoreError::DimensionLimit { dim, limit });
    }
    for t in terms {
        if let Some(i) = t.max_index() {
            if i >= basis.mode_count() {
                return Err(CoreError::ModeOutOfRange {
                    index: i,
                    mode_count: basis.mode_count(),
                });
            }
        }
        if basis.particle_number().is_some() && t.particle_delta() != 0 {
            return Err(CoreError::SectorMismatch {
                delta: t.particle_delta(),
            });
        }
    }
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for col in 0..dim {
        let src = basis.state(col);
        for t in terms {
            if let Some((tgt_mask, sign)) = t.apply_to_mask(src) {
                let row = basis
                    .index_of(tgt_mask)
                    .expect("image must stay in basis for number-conserving terms");
                m[(row, col)] += t.coefficient() * sign;
            }
        }
    }
    Ok(m)
}

/// Lowest eigenpair of a Hermitian matrix, with the deterministic phase
/// convention of [`linalg::fix_phase`].
pub fn ground_state(matrix: &DMatrix<C64>) -> Result<(f64, DVector<C64>), CoreError> {
    let (vals, vecs) = linalg::hermitian_eigen(matrix)?;
    Ok((vals[0], vecs.column(0).into_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_dimensions() {
        assert_eq!(FockBasis::build(4, Some(2)).unwrap().dim(), 6);
        assert_eq!(FockBasis::build(3, Some(0)).unwrap().dim(), 1);
        assert_eq!(FockBasis::build(10, Some(5)).unwrap().dim(), 252);
        assert_eq!(FockBasis::full(3).unwrap().dim(), 8);
    }

    #[test]
    fn invalid_basis_rejected() {
        assert!(FockBasis::build(3, Some(4)).is_err());
        assert!(FockBasis::build(0, None).is_err());
        assert!(FockBasis::build(30, None).is_err());
    }

    #[test]
    fn single_particle_order() {
        // ascending packed order puts |100>, |010>, |001> in mode order
        let b = FockBasis::build(3, Some(1)).unwrap();
        assert_eq!(b.format_state(b.state(0)), "100");
        assert_eq!(b.format_state(b.state(1)), "010");
        assert_eq!(b.format_state(b.state(2)), "001");
    }

    #[test]
    fn hop_sign_through_occupied_mode() {
        // c†_0 c_2 on |011> -> -|110>
        let b = FockBasis::full(3).unwrap();
        let st = StateVector::basis_state(Arc::clone(&b), b.parse_state("011").unwrap()).unwrap();
        let term = LadderTerm::one_body(0, 2, C64::from(1.0));
        let out = apply_ladder(&term, &st).unwrap();
        let idx = b.index_of(b.parse_state("110").unwrap()).unwrap();
        assert!((out.amplitudes()[idx] - C64::from(-1.0)).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn number_operator_and_vacuum() {
        let b = FockBasis::full(3).unwrap();
        let st = StateVector::basis_state(Arc::clone(&b), b.parse_state("010").unwrap()).unwrap();
        let out = apply_ladder(&LadderTerm::number(1), &st).unwrap();
        assert!((out.inner(&st).re - 1.0).abs() < 1e-15);

        let vac = StateVector::basis_state(Arc::clone(&b), 0).unwrap();
        let ann = LadderTerm::new(vec![], vec![0], C64::from(1.0)).unwrap();
        let out = apply_ladder(&ann, &vac).unwrap();
        assert!(out.norm() < 1e-15);
    }

    #[test]
    fn sector_mismatch_rejected() {
        let b = FockBasis::build(3, Some(1)).unwrap();
        let st = StateVector::basis_state(Arc::clone(&b), b.parse_state("100").unwrap()).unwrap();
        let cr = LadderTerm::new(vec![1], vec![], C64::from(1.0)).unwrap();
        assert!(matches!(
            apply_ladder(&cr, &st),
            Err(CoreError::SectorMismatch { .. })
        ));
    }

    #[test]
    fn repeated_index_rejected() {
        assert!(LadderTerm::new(vec![1, 1], vec![], C64::from(1.0)).is_err());
        assert!(LadderTerm::two_body(0, 1, 2, 2, C64::from(1.0)).is_err());
    }

    #[test]
    fn hopping_dimer_matrix() {
        let b = FockBasis::build(2, Some(1)).unwrap();
        let terms = vec![
            LadderTerm::one_body(0, 1, C64::from(1.0)),
            LadderTerm::one_body(1, 0, C64::from(1.0)),
        ];
        let m = dense_matrix(&terms, &b).unwrap();
        assert!((m[(0, 1)] - C64::from(1.0)).norm() < 1e-15);
        assert!((m[(1, 0)] - C64::from(1.0)).norm() < 1e-15);
        assert!(m[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn density_density_single_state() {
        let b = FockBasis::build(2, Some(2)).unwrap();
        let t = LadderTerm::new(vec![0, 1], vec![1, 0], C64::from(1.0)).unwrap();
        // c†_0 c†_1 c_1 c_0 = n_0 n_1
        let m = dense_matrix(&[t], &b).unwrap();
        assert_eq!(m.nrows(), 1);
        assert!((m[(0, 0)] - C64::from(1.0)).norm() < 1e-14);
    }

    #[test]
    fn ground_state_2x2() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::from(0.0), C64::from(1.0), C64::from(1.0), C64::from(0.0)],
        );
        let (e, v) = ground_state(&m).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        assert!(v[0].re > 0.0);
        assert!((v[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn ground_state_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::from(3.0),
            C64::from(-2.0),
            C64::from(1.0),
        ]));
        let (e, _) = ground_state(&m).unwrap();
        assert!((e + 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::from(0.0), C64::from(1.0), C64::from(2.0), C64::from(0.0)],
        );
        assert!(ground_state(&m).is_err());
    }
}
