//! Second-quantized, particle-number-conserving Hamiltonians
//! H = sum_ij h1[i,j] c†_i c_j + sum_ijkl h2[i,j,k,l] c†_i c†_j c_k c_l,
//! with a line-oriented coefficient file format:
//!
//! ```text
//! # comment
//! L 4
//! 1 0 1  0.5 0.0        # h1[0,1] = 0.5
//! 2 0 1 1 0  0.25 0.0   # h2[0,1,1,0] = 0.25
//! ```
//!
//! Indices are 0-based. The two-body coefficient multiplies the literal
//! operator string c†_i c†_j c_k c_l; no chemist/physicist reordering is
//! applied. Hermitian closure is enforced at load: a missing conjugate
//! partner is auto-completed (with a warning), a conflicting one is an
//! error.

use crate::error::CoreError;
use crate::fock::{self, FockBasis, LadderTerm, StateVector};
use crate::C64;
use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::sync::Arc;

/// One- plus two-body fermionic Hamiltonian over `mode_count` modes.
#[derive(Debug, Clone)]
pub struct SecondQuantizedHamiltonian {
    mode_count: usize,
    one_body: BTreeMap<(usize, usize), C64>,
    two_body: BTreeMap<(usize, usize, usize, usize), C64>,
}

/// Non-fatal observations from loading (auto-completed conjugates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadWarning(pub String);

const EPS: f64 = 1e-12;

impl SecondQuantizedHamiltonian {
    pub fn new(mode_count: usize) -> Self {
        SecondQuantizedHamiltonian {
            mode_count,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn one_body(&self) -> &BTreeMap<(usize, usize), C64> {
        &self.one_body
    }

    pub fn two_body(&self) -> &BTreeMap<(usize, usize, usize, usize), C64> {
        &self.two_body
    }

    pub fn set_one_body(&mut self, i: usize, j: usize, v: C64) -> Result<(), CoreError> {
        for idx in [i, j] {
            if idx >= self.mode_count {
                return Err(CoreError::ModeOutOfRange {
                    index: idx,
                    mode_count: self.mode_count,
                });
            }
        }
        if v.norm() > EPS {
            self.one_body.insert((i, j), v);
        }
        Ok(())
    }

    pub fn set_two_body(
        &mut self,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        v: C64,
    ) -> Result<(), CoreError> {
        for idx in [i, j, k, l] {
            if idx >= self.mode_count {
                return Err(CoreError::ModeOutOfRange {
                    index: idx,
                    mode_count: self.mode_count,
                });
            }
        }
        if i == j || k == l {
            return Err(CoreError::RepeatedIndex {
                index: if i == j { i } else { k },
            });
        }
        if v.norm() > EPS {
            self.two_body.insert((i, j, k, l), v);
        }
        Ok(())
    }

    /// Enforce Hermitian closure: auto-complete missing conjugate partners
    /// (reported as warnings), reject conflicting ones.
    pub fn close_hermitian(&mut self) -> Result<Vec<LoadWarning>, CoreError> {
        let mut warnings = Vec::new();
        let one: Vec<_> = self.one_body.iter().map(|(&k, &v)| (k, v)).collect();
        for ((i, j), v) in one {
            match self.one_body.get(&(j, i)) {
                Some(&w) => {
                    if (w - v.conj()).norm() > 1e-9 {
                        return Err(CoreError::Invalid(format!(
                            "one-body Hermiticity conflict at ({i},{j}): {v} vs conj-partner {w}"
                        )));
                    }
                }
                None => {
                    if i == j && v.im.abs() > 1e-9 {
                        return Err(CoreError::Invalid(format!(
                            "diagonal one-body coefficient at ({i},{i}) must be real, got {v}"
                        )));
                    }
                    if i != j {
                        self.one_body.insert((j, i), v.conj());
                        warnings.push(LoadWarning(format!(
                            "one-body ({j},{i}) missing; added conjugate of ({i},{j})"
                        )));
                    }
                }
            }
        }
        let two: Vec<_> = self.two_body.iter().map(|(&k, &v)| (k, v)).collect();
        for ((i, j, k, l), v) in two {
            // (c†_i c†_j c_k c_l)† = c†_l c†_k c_j c_i
            let partner = (l, k, j, i);
            match self.two_body.get(&partner) {
                Some(&w) => {
                    if (w - v.conj()).norm() > 1e-9 {
                        return Err(CoreError::Invalid(format!(
                            "two-body Hermiticity conflict at ({i},{j},{k},{l}): {v} vs conj-partner {w}"
                        )));
                    }
                }
                None => {
                    if partner == (i, j, k, l) {
                        if v.im.abs() > 1e-9 {
                            return Err(CoreError::Invalid(format!(
                                "self-conjugate two-body coefficient at ({i},{j},{k},{l}) must be real, got {v}"
                            )));
                        }
                    } else {
                        self.two_body.insert(partner, v.conj());
                        warnings.push(LoadWarning(format!(
                            "two-body ({},{},{},{}) missing; added conjugate of ({i},{j},{k},{l})",
                            l, k, j, i
                        )));
                    }
                }
            }
        }
        Ok(warnings)
    }

    /// Parse the coefficient file format.
    pub fn parse(text: &str) -> Result<(Self, Vec<LoadWarning>), CoreError> {
        let mut h: Option<SecondQuantizedHamiltonian> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "L" => {
                    if h.is_some() {
                        return Err(CoreError::parse(ln + 1, "duplicate L header"));
                    }
                    if fields.len() != 2 {
                        return Err(CoreError::parse(ln + 1, "L header expects one integer"));
                    }
                    let modes = fields[1]
                        .parse::<usize>()
                        .map_err(|e| CoreError::parse(ln + 1, e))?;
                    if modes == 0 || modes > fock::MAX_MODES {
                        return Err(CoreError::parse(ln + 1, format!("bad mode count {modes}")));
                    }
                    h = Some(SecondQuantizedHamiltonian::new(modes));
                }
                "1" => {
                    let h = h
                        .as_mut()
                        .ok_or_else(|| CoreError::parse(ln + 1, "coefficient before L header"))?;
                    if fields.len() != 5 {
                        return Err(CoreError::parse(ln + 1, "expected `1 i j re im`"));
                    }
                    let i = fields[1].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let j = fields[2].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let re: f64 = fields[3].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let im: f64 = fields[4].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    if h.one_body.contains_key(&(i, j)) {
                        return Err(CoreError::parse(ln + 1, format!("duplicate entry ({i},{j})")));
                    }
                    h.set_one_body(i, j, C64::new(re, im))
                        .map_err(|e| CoreError::parse(ln + 1, e))?;
                }
                "2" => {
                    let h = h
                        .as_mut()
                        .ok_or_else(|| CoreError::parse(ln + 1, "coefficient before L header"))?;
                    if fields.len() != 7 {
                        return Err(CoreError::parse(ln + 1, "expected `2 i j k l re im`"));
                    }
                    let i = fields[1].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let j = fields[2].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let k = fields[3].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let l = fields[4].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let re: f64 = fields[5].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    let im: f64 = fields[6].parse().map_err(|e| CoreError::parse(ln + 1, e))?;
                    if h.two_body.contains_key(&(i, j, k, l)) {
                        return Err(CoreError::parse(
                            ln + 1,
                            format!("duplicate entry ({i},{j},{k},{l})"),
                        ));
                    }
                    h.set_two_body(i, j, k, l, C64::new(re, im))
                        .map_err(|e| CoreError::parse(ln + 1, e))?;
                }
                other => {
                    return Err(CoreError::parse(ln + 1, format!("unknown record {other:?}")))
                }
            }
        }
        let mut h = h.ok_or_else(|| CoreError::Parse("missing L header".into()))?;
        let warnings = h.close_hermitian()?;
        Ok((h, warnings))
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, Vec<LoadWarning>), CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::Invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serialize back to the file format (sorted, canonical).
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "L {}", self.mode_count);
        for (&(i, j), v) in &self.one_body {
            let _ = writeln!(out, "1 {i} {j} {:.17e} {:.17e}", v.re, v.im);
        }
        for (&(i, j, k, l), v) in &self.two_body {
            let _ = writeln!(out, "2 {i} {j} {k} {l} {:.17e} {:.17e}", v.re, v.im);
        }
        out
    }

    /// The Hamiltonian as a list of ladder terms.
    pub fn terms(&self) -> Vec<LadderTerm> {
        let mut out = Vec::with_capacity(self.one_body.len() + self.two_body.len());
        for (&(i, j), &v) in &self.one_body {
            out.push(LadderTerm::one_body(i, j, v));
        }
        for (&(i, j, k, l), &v) in &self.two_body {
            out.push(LadderTerm::two_body(i, j, k, l, v).expect("validated at insert"));
        }
        out
    }

    pub fn dense(&self, basis: &Arc<FockBasis>) -> Result<DMatrix<C64>, CoreError> {
        fock::dense_matrix(&self.terms(), basis)
    }

    /// <psi| H |psi>, asserting the imaginary residue is negligible.
    pub fn expectation(&self, state: &StateVector) -> Result<f64, CoreError> {
        let hpsi = fock::apply_terms(&self.terms(), state)?;
        let e = state.inner(&hpsi);
        if e.im.abs() > 1e-10 * (1.0 + e.re.abs()) {
            return Err(CoreError::Invalid(format!(
                "expectation has imaginary residue {:.3e}; Hamiltonian not Hermitian-closed?",
                e.im
            )));
        }
        Ok(e.re)
    }

    /// Ground-state energy and vector on a basis sector (dense ED).
    pub fn ground_state(&self, basis: &Arc<FockBasis>) -> Result<(f64, StateVector), CoreError> {
        let m = self.dense(basis)?;
        let (e, v) = fock::ground_state(&m)?;
        let sv = StateVector::from_amplitudes(Arc::clone(basis), v.iter().copied().collect())?;
        Ok((e, sv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopping_dimer_parses() {
        let (h, w) = SecondQuantizedHamiltonian::parse("L 2\n1 0 1 1 0\n1 1 0 1 0\n").unwrap();
        assert!(w.is_empty());
        let b = FockBasis::build(2, Some(1)).unwrap();
        let m = h.dense(&b).unwrap();
        assert!((m[(0, 1)] - C64::from(1.0)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_auto_completion_warns() {
        let (h, w) = SecondQuantizedHamiltonian::parse("L 2\n1 0 1 1 0\n").unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(h.one_body().get(&(1, 0)), Some(&C64::from(1.0)));
        let (h2, w2) =
            SecondQuantizedHamiltonian::parse("L 4\n2 0 1 2 3 0.5 0.25\n").unwrap();
        assert_eq!(w2.len(), 1);
        assert_eq!(h2.two_body().get(&(3, 2, 1, 0)), Some(&C64::new(0.5, -0.25)));
    }

    #[test]
    fn hermiticity_conflicts_rejected() {
        assert!(SecondQuantizedHamiltonian::parse("L 2\n1 0 1 1 0\n1 1 0 2 0\n").is_err());
        assert!(SecondQuantizedHamiltonian::parse("L 2\n1 0 0 0 1\n").is_err());
        assert!(SecondQuantizedHamiltonian::parse("L 4\n2 0 1 1 0 0 1\n").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(SecondQuantizedHamiltonian::parse("1 0 1 1 0\n").is_err()); // before L
        assert!(SecondQuantizedHamiltonian::parse("L 2\n1 0 5 1 0\n").is_err()); // range
        assert!(SecondQuantizedHamiltonian::parse("L 2\nX 0 1\n").is_err());
        assert!(SecondQuantizedHamiltonian::parse("L 2\n1 0 1 1\n").is_err()); // arity
        assert!(SecondQuantizedHamiltonian::parse("L 2\n1 0 1 1 0\n1 0 1 1 0\n").is_err());
        // duplicate
        assert!(SecondQuantizedHamiltonian::parse("L 4\n2 0 0 1 2 1 0\n").is_err()); // i == j
    }

    #[test]
    fn expectation_real_and_matches_dense() {
        let (h, _) = SecondQuantizedHamiltonian::parse(
            "L 4\n1 0 1 0.7 0.2\n1 2 2 -0.3 0\n2 0 1 1 0 0.4 0\n",
        )
        .unwrap();
        let b = FockBasis::build(4, Some(2)).unwrap();
        let m = h.dense(&b).unwrap();
        assert!(crate::linalg::hermiticity_deviation(&m) < 1e-12);
        // random-ish normalized state
        let mut amps: Vec<C64> = (0..b.dim())
            .map(|n| C64::new((n as f64 * 0.37).sin(), (n as f64 * 0.71).cos()))
            .collect();
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let st = StateVector::from_amplitudes(Arc::clone(&b), amps.clone()).unwrap();
        let e = h.expectation(&st).unwrap();
        let v = nalgebra::DVector::from_vec(amps);
        let dense_e = (v.adjoint() * &m * &v)[(0, 0)];
        assert!((e - dense_e.re).abs() < 1e-12);
    }

    #[test]
    fn hf_energy_is_sum_of_occupied_diagonals() {
        let (h, _) =
            SecondQuantizedHamiltonian::parse("L 3\n1 0 0 -1.5 0\n1 1 1 0.25 0\n1 2 2 9.0 0\n")
                .unwrap();
        let b = FockBasis::build(3, Some(2)).unwrap();
        let st = StateVector::basis_state(Arc::clone(&b), 0b011).unwrap();
        assert!((h.expectation(&st).unwrap() - (-1.25)).abs() < 1e-13);
    }

    #[test]
    fn density_density_two_body() {
        // c†_0 c†_1 c_1 c_0 = n_0 n_1: on |11> the energy is the coefficient
        let (h, _) = SecondQuantizedHamiltonian::parse("L 2\n2 0 1 1 0 0.8 0\n").unwrap();
        let b = FockBasis::build(2, Some(2)).unwrap();
        let st = StateVector::basis_state(Arc::clone(&b), 0b11).unwrap();
        assert!((h.expectation(&st).unwrap() - 0.8).abs() < 1e-13);
    }

    #[test]
    fn round_trip_text() {
        let (h, _) = SecondQuantizedHamiltonian::parse(
            "L 4\n1 0 1 0.7 0.2\n2 0 1 2 3 0.5 -0.25\n1 3 3 1.25 0\n",
        )
        .unwrap();
        let (h2, w2) = SecondQuantizedHamiltonian::parse(&h.to_text()).unwrap();
        assert!(w2.is_empty()); // closure already materialized
        assert_eq!(h.one_body(), h2.one_body());
        assert_eq!(h.two_body(), h2.two_body());
    }

    #[test]
    fn relabeling_invariance_of_spectrum() {
        let (h, _) = SecondQuantizedHamiltonian::parse(
            "L 4\n1 0 1 0.7 0.1\n1 1 2 -0.4 0\n2 0 1 2 3 0.3 0\n1 0 0 0.9 0\n",
        )
        .unwrap();
        // permute modes by p
        let p = [2usize, 0, 3, 1];
        let mut hp = SecondQuantizedHamiltonian::new(4);
        for (&(i, j), &v) in h.one_body() {
            hp.set_one_body(p[i], p[j], v).unwrap();
        }
        for (&(i, j, k, l), &v) in h.two_body() {
            hp.set_two_body(p[i], p[j], p[k], p[l], v).unwrap();
        }
        let b = FockBasis::build(4, Some(2)).unwrap();
        let (e1, _) = h.ground_state(&b).unwrap();
        let (e2, _) = hp.ground_state(&b).unwrap();
        assert!((e1 - e2).abs() < 1e-10);
    }
}
