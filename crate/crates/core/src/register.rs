//! Mixed fermion-qubit registers. Each site either carries a fermionic
//! mode or a qubit with local states {|1~>, |1>}. The amplitude vector is
//! laid out fock-major: entry `f * 2^Q + q` is the amplitude of fermionic
//! basis state `f` together with qubit bitstring `q` (bit b of `q` set
//! means qubit b is in |1>).
//!
//! Qubit sites never enter Jordan-Wigner strings (each holds exactly one
//! atom), and the Pauli convention is Z|1> = +|1>, Z|1~> = -|1~>, so
//! R~z(theta)|1> = e^{-i theta/2}|1>.

use crate::error::CoreError;
use crate::fock::{FockBasis, StateVector};
use crate::gates::{self, GateSpec};
use crate::C64;
use nalgebra::DMatrix;
use std::sync::Arc;

/// What a physical site encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteKind {
    FermionicMode,
    Qubit,
}

/// State over a list of fermionic-mode and qubit sites.
#[derive(Debug, Clone)]
pub struct MixedRegister {
    site_kinds: Vec<SiteKind>,
    /// site index -> fermionic mode index (for mode sites)
    mode_of: Vec<Option<usize>>,
    /// site index -> qubit index (for qubit sites)
    qubit_of: Vec<Option<usize>>,
    basis: Arc<FockBasis>,
    qubit_count: usize,
    amps: Vec<C64>,
}

impl MixedRegister {
    /// Build a register with the given site layout and fermionic sector,
    /// initialized to |fock vacuum> ⊗ |1~...1~>.
    pub fn new(site_kinds: Vec<SiteKind>, particle_number: Option<usize>) -> Result<Self, CoreError> {
        let mut mode_of = Vec::with_capacity(site_kinds.len());
        let mut qubit_of = Vec::with_capacity(site_kinds.len());
        let mut modes = 0usize;
        let mut qubits = 0usize;
        for &k in &site_kinds {
            match k {
                SiteKind::FermionicMode => {
                    mode_of.push(Some(modes));
                    qubit_of.push(None);
                    modes += 1;
                }
                SiteKind::Qubit => {
                    mode_of.push(None);
                    qubit_of.push(Some(qubits));
                    qubits += 1;
                }
            }
        }
        if qubits > 20 {
            return Err(CoreError::DimensionLimit {
                dim: 1 << qubits,
                limit: 1 << 20,
            });
        }
        let basis = FockBasis::build(modes.max(1), if modes == 0 { None } else { particle_number })?;
        let dim = if modes == 0 { 1 } else { basis.dim() };
        let mut amps = vec![C64::from(0.0); dim << qubits];
        amps[0] = C64::from(1.0);
        Ok(MixedRegister {
            site_kinds,
            mode_of,
            qubit_of,
            basis,
            qubit_count: qubits,
            amps,
        })
    }

    /// Set the register to the product state |fock mask> ⊗ |qubit bits>.
    pub fn set_basis_state(&mut self, fock_mask: u64, qubit_bits: u64) -> Result<(), CoreError> {
        let f = self
            .basis
            .index_of(fock_mask)
            .ok_or_else(|| CoreError::Invalid(format!("fock state {fock_mask:#b} not in sector")))?;
        if qubit_bits >> self.qubit_count != 0 {
            return Err(CoreError::Invalid(format!(
                "qubit bits {qubit_bits:#b} exceed {} qubits",
                self.qubit_count
            )));
        }
        self.amps.fill(C64::from(0.0));
        self.amps[(f << self.qubit_count) | qubit_bits as usize] = C64::from(1.0);
        Ok(())
    }

    pub fn site_kinds(&self) -> &[SiteKind] {
        &self.site_kinds
    }

    pub fn site_count(&self) -> usize {
        self.site_kinds.len()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.amps {
                *z /= n;
            }
        }
    }

    pub fn inner(&self, other: &MixedRegister) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn mode(&self, site: usize) -> Result<usize, CoreError> {
        if site >= self.site_kinds.len() {
            return Err(CoreError::ModeOutOfRange {
                index: site,
                mode_count: self.site_kinds.len(),
            });
        }
        self.mode_of[site].ok_or(CoreError::WrongSiteKind {
            site,
            expected: "fermionic-mode",
        })
    }

    fn qubit(&self, site: usize) -> Result<usize, CoreError> {
        if site >= self.site_kinds.len() {
            return Err(CoreError::ModeOutOfRange {
                index: site,
                mode_count: self.site_kinds.len(),
            });
        }
        self.qubit_of[site].ok_or(CoreError::WrongSiteKind {
            site,
            expected: "qubit",
        })
    }

    /// Rewrite a fermionic gate's site indices as mode indices.
    fn to_modes(&self, gate: &GateSpec) -> Result<GateSpec, CoreError> {
        Ok(match *gate {
            GateSpec::Tunneling { i, j, theta } => GateSpec::Tunneling {
                i: self.mode(i)?,
                j: self.mode(j)?,
                theta,
            },
            GateSpec::Interaction { i, j, theta } => GateSpec::Interaction {
                i: self.mode(i)?,
                j: self.mode(j)?,
                theta,
            },
            GateSpec::DensityTunneling { i, j, k, theta } => GateSpec::DensityTunneling {
                i: self.mode(i)?,
                j: self.mode(j)?,
                k: self.mode(k)?,
                theta,
            },
            GateSpec::PairTunneling { i, j, k, l, theta } => GateSpec::PairTunneling {
                i: self.mode(i)?,
                j: self.mode(j)?,
                k: self.mode(k)?,
                l: self.mode(l)?,
                theta,
            },
            GateSpec::NumberPhase { i, theta } => GateSpec::NumberPhase {
                i: self.mode(i)?,
                theta,
            },
            ref g => {
                return Err(CoreError::Invalid(format!(
                    "{} is not a plain fermionic gate",
                    g.kind_name()
                )))
            }
        })
    }

    /// Apply one gate from the extended set. Gate site indices refer to
    /// register sites; the register translates to modes/qubits.
    pub fn apply(&mut self, gate: &GateSpec) -> Result<(), CoreError> {
        gate.validate()?;
        let block = 1usize << self.qubit_count;
        match *gate {
            GateSpec::QubitRx { site, theta } => {
                let q = self.qubit(site)?;
                let c = C64::from((theta / 2.0).cos());
                let s = C64::new(0.0, -(theta / 2.0).sin());
                self.rotate_qubit(q, [[c, s], [s, c]]);
            }
            GateSpec::QubitRz { site, theta } => {
                let q = self.qubit(site)?;
                // Z|1~> = -1, Z|1> = +1
                let p0 = C64::from_polar(1.0, theta / 2.0);
                let p1 = C64::from_polar(1.0, -theta / 2.0);
                let z = C64::from(0.0);
                self.rotate_qubit(q, [[p0, z], [z, p1]]);
            }
            GateSpec::ControlledInteraction {
                control,
                i,
                j,
                theta,
            } => {
                let q = self.qubit(control)?;
                let inner = self.to_modes(&GateSpec::Interaction { i, j, theta })?;
                let basis = Arc::clone(&self.basis);
                gates::apply_fermionic(&inner, &basis, &mut self.amps, block, &move |col| {
                    (col >> q) & 1 == 1
                })?;
            }
            GateSpec::ControlledTunneling {
                control,
                i,
                j,
                theta,
            } => {
                let q = self.qubit(control)?;
                let inner = self.to_modes(&GateSpec::Tunneling { i, j, theta })?;
                let basis = Arc::clone(&self.basis);
                gates::apply_fermionic(&inner, &basis, &mut self.amps, block, &move |col| {
                    (col >> q) & 1 == 1
                })?;
            }
            GateSpec::Interaction { i, j, theta }
                if self.qubit_of[i].is_some() || self.qubit_of[j].is_some() =>
            {
                // Rydberg-blockade phase with qubit |1> playing the role of
                // an occupied mode and |1~> a decoupled (empty) one.
                self.apply_interaction_mixed(i, j, theta)?;
            }
            ref g if g.is_fermionic() => {
                let inner = self.to_modes(g)?;
                let basis = Arc::clone(&self.basis);
                gates::apply_fermionic(&inner, &basis, &mut self.amps, block, &|_| true)?;
            }
            ref g => {
                return Err(CoreError::Invalid(format!(
                    "cannot apply {} gate",
                    g.kind_name()
                )))
            }
        }
        Ok(())
    }

    fn rotate_qubit(&mut self, q: usize, u: [[C64; 2]; 2]) {
        let block = 1usize << self.qubit_count;
        let bit = 1usize << q;
        for f in 0..(self.amps.len() / block) {
            let base = f * block;
            for col in 0..block {
                if col & bit == 0 {
                    let (a, b) = (self.amps[base + col], self.amps[base + col + bit]);
                    self.amps[base + col] = u[0][0] * a + u[0][1] * b;
                    self.amps[base + col + bit] = u[1][0] * a + u[1][1] * b;
                }
            }
        }
    }

    /// Interaction gate where either leg may be a qubit site: applies the
    /// phase e^{-i theta} when both legs count as occupied.
    fn apply_interaction_mixed(&mut self, i: usize, j: usize, theta: f64) -> Result<(), CoreError> {
        let block = 1usize << self.qubit_count;
        let ph = C64::from_polar(1.0, -theta);
        let leg = |site: usize| -> Result<(Option<u64>, Option<usize>), CoreError> {
            if let Some(m) = self.mode_of[site] {
                Ok((Some(1u64 << m), None))
            } else {
                Ok((None, Some(self.qubit(site)?)))
            }
        };
        let (mi, qi) = leg(i)?;
        let (mj, qj) = leg(j)?;
        for f in 0..(self.amps.len() / block) {
            let mask = self.basis.state(f);
            let occ_f = |mbit: Option<u64>| mbit.map(|b| mask & b != 0);
            for col in 0..block {
                let occ = |mbit: Option<u64>, qbit: Option<usize>| match (occ_f(mbit), qbit) {
                    (Some(o), _) => o,
                    (None, Some(q)) => (col >> q) & 1 == 1,
                    _ => unreachable!(),
                };
                if occ(mi, qi) && occ(mj, qj) {
                    self.amps[f * block + col] *= ph;
                }
            }
        }
        Ok(())
    }

    /// Probability of finding qubit-site `site` in |1>.
    pub fn qubit_one_probability(&self, site: usize) -> Result<f64, CoreError> {
        let q = self.qubit(site)?;
        let block = 1usize << self.qubit_count;
        let bit = 1usize << q;
        let mut p = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            if (idx % block) & bit != 0 {
                p += a.norm_sqr();
            }
        }
        Ok(p)
    }

    /// Project qubit-site `site` onto |1> (outcome = true) or |1~> and
    /// renormalize. Returns the pre-projection probability of the outcome.
    pub fn project_qubit(&mut self, site: usize, outcome: bool) -> Result<f64, CoreError> {
        let q = self.qubit(site)?;
        let block = 1usize << self.qubit_count;
        let bit = 1usize << q;
        let mut p = 0.0;
        for (idx, a) in self.amps.iter_mut().enumerate() {
            let is_one = (idx % block) & bit != 0;
            if is_one == outcome {
                p += a.norm_sqr();
            } else {
                *a = C64::from(0.0);
            }
        }
        if p > 0.0 {
            let s = p.sqrt();
            for a in &mut self.amps {
                *a /= s;
            }
        }
        Ok(p)
    }

    /// Expectation of n at a fermionic-mode site.
    pub fn mode_occupation(&self, site: usize) -> Result<f64, CoreError> {
        let m = self.mode(site)?;
        let block = 1usize << self.qubit_count;
        let bit = 1u64 << m;
        let mut n = 0.0;
        for f in 0..(self.amps.len() / block) {
            if self.basis.state(f) & bit != 0 {
                for col in 0..block {
                    n += self.amps[f * block + col].norm_sqr();
                }
            }
        }
        Ok(n)
    }

    /// View the register's fermionic part as a plain state vector; only
    /// valid when the register has no qubits.
    pub fn as_state_vector(&self) -> Result<StateVector, CoreError> {
        if self.qubit_count != 0 {
            return Err(CoreError::Invalid(
                "register has qubit sites; no plain fermionic view".into(),
            ));
        }
        StateVector::from_amplitudes(Arc::clone(&self.basis), self.amps.clone())
    }

    /// Dense matrix of a gate over the whole register, built column by
    /// column. Test/oracle use only.
    pub fn dense_unitary_of(&self, gate: &GateSpec) -> Result<DMatrix<C64>, CoreError> {
        let dim = self.dim();
        if dim > crate::fock::DENSE_LIMIT {
            return Err(CoreError::DimensionLimit {
                dim,
                limit: crate::fock::DENSE_LIMIT,
            });
        }
        let mut u = DMatrix::<C64>::zeros(dim, dim);
        for col in 0..dim {
            let mut reg = self.clone();
            reg.amps.fill(C64::from(0.0));
            reg.amps[col] = C64::from(1.0);
            reg.apply(gate)?;
            for row in 0..dim {
                u[(row, col)] = reg.amps[row];
            }
        }
        Ok(u)
    }
}
