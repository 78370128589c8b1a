//! Native gate set of the processor: generalized tunneling and interaction
//! gates, density- and pair-tunneling composites, number phases, qubit
//! rotations, and controlled gates, plus the Rydberg and shuttle protocols
//! that realize the two-mode primitives on hardware.
//!
//! Gate application uses closed-form 2x2 block / diagonal kernels; the
//! dense generator exponential ([`GateSpec::dense_unitary`]) is the oracle
//! they are checked against.

use crate::error::CoreError;
use crate::fock::{self, FockBasis, LadderTerm, StateVector};
use crate::linalg;
use crate::C64;
use nalgebra::DMatrix;
use std::sync::Arc;

/// sin(x)/x with the removable singularity filled in.
#[inline]
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// One gate from the native set (plain fermionic gates) or its fermion-qubit
/// extension (qubit rotations and controlled gates). Angles are kept as
/// given; nothing is reduced mod 2pi before use.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    /// U^t = exp(-i[(t1/2)(e^{-i t2} c†_i c_j + h.c.) + (t3/2)(n_i - n_j)])
    Tunneling { i: usize, j: usize, theta: [f64; 3] },
    /// U^int = exp(-i theta n_i n_j)
    Interaction { i: usize, j: usize, theta: f64 },
    /// U^dt = exp(-i t1 (e^{-i t2} c†_i n_j c_k + h.c.))
    DensityTunneling {
        i: usize,
        j: usize,
        k: usize,
        theta: [f64; 2],
    },
    /// U^pt = exp(-i t1 (e^{-i t2} c†_i c†_j c_k c_l + h.c.))
    PairTunneling {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        theta: [f64; 2],
    },
    /// U^n = exp(-i theta n_i)
    NumberPhase { i: usize, theta: f64 },
    /// exp(-i (theta/2) X) on a qubit site's {|1~>, |1>} subspace
    QubitRx { site: usize, theta: f64 },
    /// exp(-i (theta/2) Z), with Z|1> = +|1>
    QubitRz { site: usize, theta: f64 },
    /// |1~><1~| ⊗ 1 + |1><1| ⊗ U^int_{ij}(theta)
    ControlledInteraction {
        control: usize,
        i: usize,
        j: usize,
        theta: f64,
    },
    /// |1~><1~| ⊗ 1 + |1><1| ⊗ U^t_{ij}(theta)
    ControlledTunneling {
        control: usize,
        i: usize,
        j: usize,
        theta: [f64; 3],
    },
}

impl GateSpec {
    /// Short serialization token for this gate kind.
    pub fn kind_name(&self) -> &'static str {
        match self {
            GateSpec::Tunneling { .. } => "TUN",
            GateSpec::Interaction { .. } => "INT",
            GateSpec::DensityTunneling { .. } => "DT",
            GateSpec::PairTunneling { .. } => "PT",
            GateSpec::NumberPhase { .. } => "NPH",
            GateSpec::QubitRx { .. } => "RX",
            GateSpec::QubitRz { .. } => "RZ",
            GateSpec::ControlledInteraction { .. } => "CINT",
            GateSpec::ControlledTunneling { .. } => "CTUN",
        }
    }

    /// All sites touched by the gate, control first for controlled kinds.
    pub fn support(&self) -> Vec<usize> {
        match *self {
            GateSpec::Tunneling { i, j, .. } => vec![i, j],
            GateSpec::Interaction { i, j, .. } => vec![i, j],
            GateSpec::DensityTunneling { i, j, k, .. } => vec![i, j, k],
            GateSpec::PairTunneling { i, j, k, l, .. } => vec![i, j, k, l],
            GateSpec::NumberPhase { i, .. } => vec![i],
            GateSpec::QubitRx { site, .. } | GateSpec::QubitRz { site, .. } => vec![site],
            GateSpec::ControlledInteraction { control, i, j, .. } => vec![control, i, j],
            GateSpec::ControlledTunneling { control, i, j, .. } => vec![control, i, j],
        }
    }

    /// Gate parameters as a flat slice.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateSpec::Tunneling { theta, .. } | GateSpec::ControlledTunneling { theta, .. } => {
                theta.to_vec()
            }
            GateSpec::Interaction { theta, .. }
            | GateSpec::NumberPhase { theta, .. }
            | GateSpec::QubitRx { theta, .. }
            | GateSpec::QubitRz { theta, .. }
            | GateSpec::ControlledInteraction { theta, .. } => vec![theta],
            GateSpec::DensityTunneling { theta, .. } | GateSpec::PairTunneling { theta, .. } => {
                theta.to_vec()
            }
        }
    }

    /// Reject duplicate targets and non-finite angles.
    pub fn validate(&self) -> Result<(), CoreError> {
        let support = self.support();
        for (n, &s) in support.iter().enumerate() {
            if support[..n].contains(&s) {
                return Err(CoreError::RepeatedIndex { index: s });
            }
        }
        if self.params().iter().any(|p| !p.is_finite()) {
            return Err(CoreError::Invalid(format!(
                "non-finite parameter in {} gate",
                self.kind_name()
            )));
        }
        Ok(())
    }

    /// True for the plain fermionic gates that act on a bare Fock-space
    /// state without any qubit sites.
    pub fn is_fermionic(&self) -> bool {
        matches!(
            self,
            GateSpec::Tunneling { .. }
                | GateSpec::Interaction { .. }
                | GateSpec::DensityTunneling { .. }
                | GateSpec::PairTunneling { .. }
                | GateSpec::NumberPhase { .. }
        )
    }

    /// Hermitian generator H with U = exp(-i H), as ladder terms.
    /// Only defined for the fermionic kinds.
    pub fn generator_terms(&self) -> Result<Vec<LadderTerm>, CoreError> {
        self.validate()?;
        match *self {
            GateSpec::Tunneling { i, j, theta } => {
                let hop = C64::from_polar(theta[0] / 2.0, -theta[1]);
                let mut t = vec![
                    LadderTerm::one_body(i, j, hop),
                    LadderTerm::one_body(j, i, hop.conj()),
                ];
                t.push(LadderTerm::one_body(i, i, C64::from(theta[2] / 2.0)));
                t.push(LadderTerm::one_body(j, j, C64::from(-theta[2] / 2.0)));
                Ok(t)
            }
            GateSpec::Interaction { i, j, theta } => {
                // n_i n_j = c†_i c†_j c_j c_i
                Ok(vec![LadderTerm::new(
                    vec![i, j],
                    vec![j, i],
                    C64::from(theta),
                )?])
            }
            GateSpec::DensityTunneling { i, j, k, theta } => {
                // c†_i n_j c_k = c†_i c†_j c_j c_k
                let coeff = C64::from_polar(theta[0], -theta[1]);
                let fwd = LadderTerm::new(vec![i, j], vec![j, k], coeff)?;
                let bwd = fwd.adjoint();
                Ok(vec![fwd, bwd])
            }
            GateSpec::PairTunneling { i, j, k, l, theta } => {
                let coeff = C64::from_polar(theta[0], -theta[1]);
                let fwd = LadderTerm::new(vec![i, j], vec![k, l], coeff)?;
                let bwd = fwd.adjoint();
                Ok(vec![fwd, bwd])
            }
            GateSpec::NumberPhase { i, theta } => {
                Ok(vec![LadderTerm::one_body(i, i, C64::from(theta))])
            }
            _ => Err(CoreError::Invalid(format!(
                "{} gate has no fermionic generator",
                self.kind_name()
            ))),
        }
    }

    /// Dense unitary over a basis via the generator and the matrix
    /// exponential oracle. Slow; intended for tests and small registers.
    pub fn dense_unitary(&self, basis: &Arc<FockBasis>) -> Result<DMatrix<C64>, CoreError> {
        let h = fock::dense_matrix(&self.generator_terms()?, basis)?;
        Ok(linalg::expm(&(h * C64::new(0.0, -1.0))))
    }

    /// Apply this (fermionic) gate to a plain state vector.
    pub fn apply(&self, state: &mut StateVector) -> Result<(), CoreError> {
        let basis = Arc::clone(state.basis());
        apply_fermionic(self, &basis, state.amplitudes_mut(), 1, &|_| true)
    }
}

/// Apply a 2x2 block [[d00, d01], [d10, d11]] to the amplitude pair.
#[inline]
fn rotate_pair(a: &mut C64, b: &mut C64, u: &[[C64; 2]; 2]) {
    let (x, y) = (*a, *b);
    *a = u[0][0] * x + u[0][1] * y;
    *b = u[1][0] * x + u[1][1] * y;
}

/// Block unitary of the tunneling generator restricted to the pair
/// {|i occupied>, |j occupied>} with JW string sign `sign`.
pub(crate) fn tunneling_block(theta: [f64; 3], sign: f64) -> [[C64; 2]; 2] {
    let half_t = theta[0] / 2.0;
    let half_d = theta[2] / 2.0;
    let r = (half_t * half_t + half_d * half_d).sqrt();
    let c = C64::from(r.cos());
    let s = sinc(r);
    let mi = C64::new(0.0, -1.0);
    let off = mi * s * half_t * sign;
    [
        [c + mi * (s * half_d), off * C64::from_polar(1.0, -theta[1])],
        [off * C64::from_polar(1.0, theta[1]), c - mi * (s * half_d)],
    ]
}

/// Block unitary of a bare transfer generator t1 (e^{-i t2} T + h.c.)
/// restricted to {|target>, |source>} with sign from T|source> = sign|target>.
pub(crate) fn transfer_block(theta: [f64; 2], sign: f64) -> [[C64; 2]; 2] {
    let c = C64::from(theta[0].cos());
    let off = C64::new(0.0, -theta[0].sin()) * sign;
    [
        [c, off * C64::from_polar(1.0, -theta[1])],
        [off * C64::from_polar(1.0, theta[1]), c],
    ]
}

/// Closed-form application of a fermionic gate over a fock-major amplitude
/// layout: amplitude of (fock index f, column q) lives at `f * block + q`.
/// `active` selects which columns the gate acts on (used by controlled
/// gates on mixed registers); inactive columns are untouched.
pub(crate) fn apply_fermionic(
    gate: &GateSpec,
    basis: &Arc<FockBasis>,
    amps: &mut [C64],
    block: usize,
    active: &dyn Fn(usize) -> bool,
) -> Result<(), CoreError> {
    gate.validate()?;
    let mode_count = basis.mode_count();
    if let Some(&m) = gate.support().iter().max() {
        if !gate.is_fermionic() {
            return Err(CoreError::Invalid(format!(
                "{} gate cannot act on a bare fermionic register",
                gate.kind_name()
            )));
        }
        if m >= mode_count {
            return Err(CoreError::ModeOutOfRange {
                index: m,
                mode_count,
            });
        }
    }
    debug_assert_eq!(amps.len(), basis.dim() * block);

    let cols: Vec<usize> = (0..block).filter(|&q| active(q)).collect();

    match *gate {
        GateSpec::NumberPhase { i, theta } => {
            let ph = C64::from_polar(1.0, -theta);
            for f in 0..basis.dim() {
                if (basis.state(f) >> i) & 1 == 1 {
                    for &q in &cols {
                        amps[f * block + q] *= ph;
                    }
                }
            }
        }
        GateSpec::Interaction { i, j, theta } => {
            let ph = C64::from_polar(1.0, -theta);
            let need = (1u64 << i) | (1u64 << j);
            for f in 0..basis.dim() {
                if basis.state(f) & need == need {
                    for &q in &cols {
                        amps[f * block + q] *= ph;
                    }
                }
            }
        }
        GateSpec::Tunneling { i, j, theta } => {
            let bi = 1u64 << i;
            let bj = 1u64 << j;
            for f in 0..basis.dim() {
                let m = basis.state(f);
                // visit each coupled pair once, from the i-occupied side
                if m & bi != 0 && m & bj == 0 {
                    let partner_mask = (m ^ bi) | bj;
                    let g = basis
                        .index_of(partner_mask)
                        .expect("tunneling image stays in sector");
                    // sign of <m| c†_i c_j |partner>
                    let (img, sign) = LadderTerm::one_body(i, j, C64::from(1.0))
                        .apply_to_mask(partner_mask)
                        .expect("pair structure guarantees a nonzero image");
                    debug_assert_eq!(img, m);
                    let u = tunneling_block(theta, sign);
                    for &q in &cols {
                        let (fa, fb) = (f * block + q, g * block + q);
                        let (mut x, mut y) = (amps[fa], amps[fb]);
                        rotate_pair(&mut x, &mut y, &u);
                        amps[fa] = x;
                        amps[fb] = y;
                    }
                } else if (m & bi != 0) == (m & bj != 0) && theta[2] != 0.0 {
                    // both or neither occupied: detuning cancels, identity
                }
            }
        }
        GateSpec::DensityTunneling { i, j, k, theta } => {
            let bi = 1u64 << i;
            let bj = 1u64 << j;
            let bk = 1u64 << k;
            for f in 0..basis.dim() {
                let m = basis.state(f);
                if m & bj == 0 {
                    continue;
                }
                if m & bi != 0 && m & bk == 0 {
                    let partner_mask = (m ^ bi) | bk;
                    let g = basis
                        .index_of(partner_mask)
                        .expect("density tunneling image stays in sector");
                    let term =
                        LadderTerm::new(vec![i, j], vec![j, k], C64::from(1.0)).expect("distinct");
                    let (img, sign) = term
                        .apply_to_mask(partner_mask)
                        .expect("pair structure guarantees a nonzero image");
                    debug_assert_eq!(img, m);
                    let u = transfer_block(theta, sign);
                    for &q in &cols {
                        let (fa, fb) = (f * block + q, g * block + q);
                        let (mut x, mut y) = (amps[fa], amps[fb]);
                        rotate_pair(&mut x, &mut y, &u);
                        amps[fa] = x;
                        amps[fb] = y;
                    }
                }
            }
        }
        GateSpec::PairTunneling { i, j, k, l, theta } => {
            let bij = (1u64 << i) | (1u64 << j);
            let bkl = (1u64 << k) | (1u64 << l);
            for f in 0..basis.dim() {
                let m = basis.state(f);
                if m & bij == bij && m & bkl == 0 {
                    let partner_mask = (m ^ bij) | bkl;
                    let g = basis
                        .index_of(partner_mask)
                        .expect("pair tunneling image stays in sector");
                    let term =
                        LadderTerm::new(vec![i, j], vec![k, l], C64::from(1.0)).expect("distinct");
                    let (img, sign) = term
                        .apply_to_mask(partner_mask)
                        .expect("pair structure guarantees a nonzero image");
                    debug_assert_eq!(img, m);
                    let u = transfer_block(theta, sign);
                    for &q in &cols {
                        let (fa, fb) = (f * block + q, g * block + q);
                        let (mut x, mut y) = (amps[fa], amps[fb]);
                        rotate_pair(&mut x, &mut y, &u);
                        amps[fa] = x;
                        amps[fb] = y;
                    }
                }
            }
        }
        _ => {
            return Err(CoreError::Invalid(format!(
                "{} gate cannot act on a bare fermionic register",
                gate.kind_name()
            )))
        }
    }
    Ok(())
}

/// The diagonal Rydberg-pulse unitary: singly-occupied configurations pick
/// up the phase phi01 and the doubly-occupied one the total phase phi11
/// (the convention of blockade-gate pulse engineering, where phi11 is the
/// accumulated |11> phase rather than a density-density coefficient).
#[derive(Debug, Clone, Copy)]
pub struct RydbergPulse {
    pub i: usize,
    pub j: usize,
    pub phi01: f64,
    pub phi11: f64,
}

impl RydbergPulse {
    pub fn apply(&self, state: &mut StateVector) -> Result<(), CoreError> {
        let basis = Arc::clone(state.basis());
        if self.i == self.j {
            return Err(CoreError::RepeatedIndex { index: self.i });
        }
        for idx in [self.i, self.j] {
            if idx >= basis.mode_count() {
                return Err(CoreError::ModeOutOfRange {
                    index: idx,
                    mode_count: basis.mode_count(),
                });
            }
        }
        let (bi, bj) = (1u64 << self.i, 1u64 << self.j);
        for f in 0..basis.dim() {
            let m = basis.state(f);
            let occ = (m & bi != 0) as u32 + (m & bj != 0) as u32;
            let phase = match occ {
                1 => self.phi01,
                2 => self.phi11,
                _ => 0.0,
            };
            state.amplitudes_mut()[f] *= C64::from_polar(1.0, phase);
        }
        Ok(())
    }

    pub fn dense_unitary(&self, basis: &Arc<FockBasis>) -> Result<DMatrix<C64>, CoreError> {
        let dim = basis.dim();
        let mut u = DMatrix::<C64>::zeros(dim, dim);
        let (bi, bj) = (1u64 << self.i, 1u64 << self.j);
        for f in 0..dim {
            let m = basis.state(f);
            let occ = (m & bi != 0) as u32 + (m & bj != 0) as u32;
            let phase = match occ {
                1 => self.phi01,
                2 => self.phi11,
                _ => 0.0,
            };
            u[(f, f)] = C64::from_polar(1.0, phase);
        }
        Ok(u)
    }
}

/// Realize U^int_{ij}(theta) on hardware: a Rydberg pulse with
/// phi11 = 2 phi01 - theta followed by single-mode phase corrections
/// e^{-i phi01 n_i} e^{-i phi01 n_j}. Returns the pulse and the two
/// correction gates, in application order.
pub fn rydberg_interaction(theta: f64, phi01: f64, i: usize, j: usize) -> (RydbergPulse, [GateSpec; 2]) {
    let pulse = RydbergPulse {
        i,
        j,
        phi01,
        phi11: 2.0 * phi01 - theta,
    };
    let corrections = [
        GateSpec::NumberPhase { i, theta: phi01 },
        GateSpec::NumberPhase { i: j, theta: phi01 },
    ];
    (pulse, corrections)
}

/// One internal-rotation pulse of the shuttle protocol, acting between two
/// modes of the local three-mode model {storage_i = 0, transport = 1,
/// storage_j = 2}. The generator is the same as the tunneling gate's, so a
/// pulse with parameters theta between modes (a, b) is U^t_{ab}(theta).
#[derive(Debug, Clone, Copy)]
pub struct ShuttlePulse {
    pub a: usize,
    pub b: usize,
    pub theta: [f64; 3],
}

/// The shuttle protocol realizing U^t(theta) between two storage sites:
/// (1) pi-pulse storage_i -> transport, (2) move (identity), (3) rotation
/// with the tunneling phase advanced by pi/2 at site j, (4) move back,
/// (5) undo the pi-pulse. Moves are ideal and omitted; the noise module
/// perturbs the returned pulses.
pub fn shuttle_sequence(theta: [f64; 3]) -> [ShuttlePulse; 3] {
    [
        ShuttlePulse {
            a: 0,
            b: 1,
            theta: [std::f64::consts::PI, 0.0, 0.0],
        },
        ShuttlePulse {
            a: 1,
            b: 2,
            theta: [theta[0], theta[1] + std::f64::consts::FRAC_PI_2, theta[2]],
        },
        ShuttlePulse {
            a: 0,
            b: 1,
            theta: [-std::f64::consts::PI, 0.0, 0.0],
        },
    ]
}

/// Dense 8x8 unitary of a pulse list over the full three-mode Fock space.
pub fn shuttle_unitary(pulses: &[ShuttlePulse]) -> Result<DMatrix<C64>, CoreError> {
    let basis = FockBasis::full(3)?;
    let mut u = DMatrix::<C64>::identity(8, 8);
    for p in pulses {
        let g = GateSpec::Tunneling {
            i: p.a,
            j: p.b,
            theta: p.theta,
        };
        u = g.dense_unitary(&basis)? * u;
    }
    Ok(u)
}

/// Restrict a three-mode unitary to the transport-empty subspace and remap
/// it onto the two-mode full Fock space (4x4), ordering {|00>, |10>, |01>, |11>}.
/// Fails if the unitary leaks out of the subspace by more than 1e-10.
pub fn shuttle_effective_two_mode(u3: &DMatrix<C64>) -> Result<DMatrix<C64>, CoreError> {
    // transport-empty masks in [s_i, transport, s_j] bit order
    let keep: [usize; 4] = [0b000, 0b001, 0b100, 0b101];
    let mut u2 = DMatrix::<C64>::zeros(4, 4);
    let mut leak = 0.0f64;
    for (c2, &c3) in keep.iter().enumerate() {
        for r3 in 0..8 {
            let z = u3[(r3, c3)];
            if let Some(r2) = keep.iter().position(|&k| k == r3) {
                u2[(r2, c2)] = z;
            } else {
                leak = leak.max(z.norm());
            }
        }
    }
    if leak > 1e-10 {
        return Err(CoreError::Invalid(format!(
            "shuttle unitary leaks out of the transport-empty subspace: {leak:.3e}"
        )));
    }
    Ok(u2)
}

/// Apply an arbitrary (possibly sub-unitary) single-particle 2x2
/// kernel on the mode pair {i, j} to a many-body state vector: the
/// singly-occupied pair rotates by the kernel with the usual string
/// sign on the off-diagonal elements, the doubly-occupied amplitude
/// scales by det(kernel) (the induced map on the two-particle wedge),
/// and the empty amplitude is untouched. For a unitary kernel this
/// coincides with the corresponding tunneling gate; for the leaky
/// kernels of the noisy shuttle model the state norm shrinks by the
/// population lost to the transport trap.
pub fn apply_two_mode_kernel(
    state: &mut StateVector,
    i: usize,
    j: usize,
    kernel: &[[C64; 2]; 2],
) -> Result<(), CoreError> {
    let basis = Arc::clone(state.basis());
    let mode_count = basis.mode_count();
    if i >= mode_count || j >= mode_count {
        return Err(CoreError::ModeOutOfRange {
            index: i.max(j),
            mode_count,
        });
    }
    if i == j {
        return Err(CoreError::RepeatedIndex { index: i });
    }
    let det = kernel[0][0] * kernel[1][1] - kernel[0][1] * kernel[1][0];
    let (bi, bj) = (1u64 << i, 1u64 << j);
    let amps = state.amplitudes_mut();
    for f in 0..basis.dim() {
        let m = basis.state(f);
        if m & bi != 0 && m & bj == 0 {
            let partner_mask = (m ^ bi) | bj;
            let g = basis
                .index_of(partner_mask)
                .expect("kernel image stays in sector");
            let (img, sign) = LadderTerm::one_body(i, j, C64::from(1.0))
                .apply_to_mask(partner_mask)
                .expect("pair structure guarantees a nonzero image");
            debug_assert_eq!(img, m);
            let s = C64::from(sign);
            let u = [
                [kernel[0][0], kernel[0][1] * s],
                [kernel[1][0] * s, kernel[1][1]],
            ];
            let (mut x, mut y) = (amps[f], amps[g]);
            rotate_pair(&mut x, &mut y, &u);
            amps[f] = x;
            amps[g] = y;
        } else if m & bi != 0 && m & bj != 0 {
            amps[f] *= det;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(basis: &Arc<FockBasis>, rng: &mut ChaCha8Rng) -> StateVector {
        let amps: Vec<C64> = (0..basis.dim())
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut sv = StateVector::from_amplitudes(Arc::clone(basis), amps).unwrap();
        sv.normalize();
        sv
    }

    fn check_against_oracle(gate: &GateSpec, basis: &Arc<FockBasis>, rng: &mut ChaCha8Rng) {
        let u = gate.dense_unitary(basis).unwrap();
        assert!(linalg::unitarity_deviation(&u) < 1e-12, "{gate:?}");
        let st = random_state(basis, rng);
        let mut fast = st.clone();
        gate.apply(&mut fast).unwrap();
        let expect = &u * nalgebra::DVector::from_column_slice(st.amplitudes());
        let diff: f64 = fast
            .amplitudes()
            .iter()
            .zip(expect.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-12, "{gate:?} deviates {diff:.3e}");
    }

    #[test]
    fn tunneling_pi_pulse_transfers() {
        let b = FockBasis::build(2, Some(1)).unwrap();
        let mut st = StateVector::basis_state(Arc::clone(&b), 0b01).unwrap(); // |10>
        GateSpec::Tunneling {
            i: 0,
            j: 1,
            theta: [std::f64::consts::PI, 0.0, 0.0],
        }
        .apply(&mut st)
        .unwrap();
        let idx = b.index_of(0b10).unwrap();
        assert!((st.amplitudes()[idx] - C64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn tunneling_pure_detuning() {
        let b = FockBasis::build(2, Some(1)).unwrap();
        let mut st = StateVector::basis_state(Arc::clone(&b), 0b01).unwrap();
        GateSpec::Tunneling {
            i: 0,
            j: 1,
            theta: [0.0, 0.0, 0.8],
        }
        .apply(&mut st)
        .unwrap();
        let idx = b.index_of(0b01).unwrap();
        assert!((st.amplitudes()[idx] - C64::from_polar(1.0, -0.4)).norm() < 1e-14);
    }

    #[test]
    fn gates_match_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b4 = FockBasis::full(4).unwrap();
        let b5 = FockBasis::full(5).unwrap();
        for _ in 0..10 {
            let th3 = [
                rng.gen::<f64>() * 4.0 - 2.0,
                rng.gen::<f64>() * 4.0 - 2.0,
                rng.gen::<f64>() * 4.0 - 2.0,
            ];
            let th2 = [th3[0], th3[1]];
            check_against_oracle(
                &GateSpec::Tunneling {
                    i: 0,
                    j: 3,
                    theta: th3,
                },
                &b4,
                &mut rng,
            );
            check_against_oracle(
                &GateSpec::Interaction {
                    i: 1,
                    j: 3,
                    theta: th3[0],
                },
                &b4,
                &mut rng,
            );
            check_against_oracle(
                &GateSpec::DensityTunneling {
                    i: 0,
                    j: 2,
                    k: 3,
                    theta: th2,
                },
                &b4,
                &mut rng,
            );
            check_against_oracle(
                &GateSpec::DensityTunneling {
                    i: 4,
                    j: 0,
                    k: 1,
                    theta: th2,
                },
                &b5,
                &mut rng,
            );
            check_against_oracle(
                &GateSpec::PairTunneling {
                    i: 0,
                    j: 2,
                    k: 1,
                    l: 3,
                    theta: th2,
                },
                &b4,
                &mut rng,
            );
            check_against_oracle(
                &GateSpec::NumberPhase {
                    i: 2,
                    theta: th3[2],
                },
                &b4,
                &mut rng,
            );
        }
    }

    #[test]
    fn tunneling_jw_string_long_range() {
        // hop 0 <-> 2 across an occupied middle mode picks up a sign;
        // the oracle carries the JW string, so matching it is the check
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = FockBasis::full(3).unwrap();
        check_against_oracle(
            &GateSpec::Tunneling {
                i: 0,
                j: 2,
                theta: [1.1, 0.4, -0.3],
            },
            &b,
            &mut rng,
        );
    }

    #[test]
    fn interaction_examples() {
        let b = FockBasis::full(4).unwrap();
        let mut st = StateVector::basis_state(Arc::clone(&b), 0b1101).unwrap(); // |1011>
        GateSpec::Interaction {
            i: 0,
            j: 3,
            theta: 0.3,
        }
        .apply(&mut st)
        .unwrap();
        let idx = b.index_of(0b1101).unwrap();
        assert!((st.amplitudes()[idx] - C64::from_polar(1.0, -0.3)).norm() < 1e-14);

        let mut st = StateVector::basis_state(Arc::clone(&b), 0b0001).unwrap();
        GateSpec::Interaction {
            i: 0,
            j: 1,
            theta: 2.2,
        }
        .apply(&mut st)
        .unwrap();
        assert!((st.amplitudes()[b.index_of(0b0001).unwrap()] - C64::from(1.0)).norm() < 1e-14);
    }

    #[test]
    fn gate_inverse_is_unitary_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = FockBasis::full(4).unwrap();
        let th = [0.9, -1.3, 0.5];
        let g = GateSpec::Tunneling {
            i: 1,
            j: 3,
            theta: th,
        };
        let u = g.dense_unitary(&b).unwrap();
        let st = random_state(&b, &mut rng);
        let mut round = st.clone();
        g.apply(&mut round).unwrap();
        // undo via the adjoint matrix
        let back = u.adjoint() * nalgebra::DVector::from_column_slice(round.amplitudes());
        let diff: f64 = st
            .amplitudes()
            .iter()
            .zip(back.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-12);
    }

    #[test]
    fn duplicate_targets_rejected() {
        assert!(GateSpec::Tunneling {
            i: 2,
            j: 2,
            theta: [1.0, 0.0, 0.0]
        }
        .validate()
        .is_err());
        assert!(GateSpec::PairTunneling {
            i: 0,
            j: 1,
            k: 1,
            l: 3,
            theta: [1.0, 0.0]
        }
        .validate()
        .is_err());
    }

    #[test]
    fn dt_vacuum_and_identity() {
        let b = FockBasis::full(3).unwrap();
        let mut st = StateVector::basis_state(Arc::clone(&b), 0b001).unwrap(); // |100>, n_j = 0
        GateSpec::DensityTunneling {
            i: 0,
            j: 1,
            k: 2,
            theta: [1.7, 0.3],
        }
        .apply(&mut st)
        .unwrap();
        assert!((st.amplitudes()[b.index_of(0b001).unwrap()] - C64::from(1.0)).norm() < 1e-14);
    }

    #[test]
    fn pt_full_transfer() {
        let b = FockBasis::full(4).unwrap();
        // |0011> in mode order means modes 2,3 occupied: mask 0b1100
        let mut st = StateVector::basis_state(Arc::clone(&b), 0b1100).unwrap();
        GateSpec::PairTunneling {
            i: 0,
            j: 1,
            k: 2,
            l: 3,
            theta: [std::f64::consts::FRAC_PI_2, 0.0],
        }
        .apply(&mut st)
        .unwrap();
        let idx = b.index_of(0b0011).unwrap();
        assert!((st.amplitudes()[idx].norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rydberg_reproduces_interaction() {
        let b = FockBasis::full(2).unwrap();
        let theta = 1.1;
        let phi01 = 0.4;
        let (pulse, corr) = rydberg_interaction(theta, phi01, 0, 1);
        assert!((pulse.phi11 - (2.0 * phi01 - theta)).abs() < 1e-15);
        let mut u = pulse.dense_unitary(&b).unwrap();
        for g in &corr {
            u = g.dense_unitary(&b).unwrap() * u;
        }
        let target = GateSpec::Interaction {
            i: 0,
            j: 1,
            theta,
        }
        .dense_unitary(&b)
        .unwrap();
        assert!(linalg::phase_distance(&u, &target) < 1e-12);
    }

    #[test]
    fn rydberg_vacuum_invariant() {
        let b = FockBasis::full(2).unwrap();
        let mut st = StateVector::basis_state(Arc::clone(&b), 0).unwrap();
        RydbergPulse {
            i: 0,
            j: 1,
            phi01: 0.9,
            phi11: -0.2,
        }
        .apply(&mut st)
        .unwrap();
        assert!((st.amplitudes()[0] - C64::from(1.0)).norm() < 1e-15);
    }

    #[test]
    fn shuttle_equals_tunneling() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let two = FockBasis::full(2).unwrap();
        let mut worst = 0.0f64;
        for trial in 0..100 {
            let theta = if trial == 0 {
                [std::f64::consts::PI, 0.0, 0.0]
            } else {
                [
                    rng.gen::<f64>() * 6.0 - 3.0,
                    rng.gen::<f64>() * 6.0 - 3.0,
                    rng.gen::<f64>() * 6.0 - 3.0,
                ]
            };
            let u3 = shuttle_unitary(&shuttle_sequence(theta)).unwrap();
            let u2 = shuttle_effective_two_mode(&u3).unwrap();
            let target = GateSpec::Tunneling {
                i: 0,
                j: 1,
                theta,
            }
            .dense_unitary(&two)
            .unwrap();
            worst = worst.max(linalg::phase_distance(&u2, &target));
        }
        assert!(worst < 1e-10, "worst shuttle distance {worst:.3e}");
    }

    #[test]
    fn shuttle_null_pulse_is_identity() {
        let u3 = shuttle_unitary(&shuttle_sequence([0.0, 0.0, 0.0])).unwrap();
        let u2 = shuttle_effective_two_mode(&u3).unwrap();
        assert!(linalg::phase_distance(&u2, &DMatrix::<C64>::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn unitary_two_mode_kernel_matches_tunneling_gate() {
        let basis = FockBasis::full(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (i, j) in [(0usize, 1usize), (1, 3), (0, 3)] {
            let theta = [
                rng.gen::<f64>() * 3.0 - 1.5,
                rng.gen::<f64>() * 3.0 - 1.5,
                rng.gen::<f64>() * 3.0 - 1.5,
            ];
            let mut via_kernel = random_state(&basis, &mut rng);
            let mut via_gate = via_kernel.clone();
            apply_two_mode_kernel(&mut via_kernel, i, j, &tunneling_block(theta, 1.0)).unwrap();
            GateSpec::Tunneling { i, j, theta }.apply(&mut via_gate).unwrap();
            let d = via_kernel
                .amplitudes()
                .iter()
                .zip(via_gate.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(d < 1e-12, "({i},{j}): distance {d:.3e}");
        }
    }

    #[test]
    fn scaled_kernel_shrinks_doubly_occupied_by_determinant() {
        let basis = FockBasis::full(2).unwrap();
        let amps = vec![C64::from(0.0), C64::from(0.0), C64::from(0.0), C64::from(1.0)];
        let mut sv = StateVector::from_amplitudes(Arc::clone(&basis), amps).unwrap();
        let k = [
            [C64::from(0.9), C64::from(0.0)],
            [C64::from(0.0), C64::from(0.8)],
        ];
        apply_two_mode_kernel(&mut sv, 0, 1, &k).unwrap();
        let top = sv.amplitudes()[basis.index_of(0b11).unwrap()];
        assert!((top - C64::from(0.72)).norm() < 1e-14, "{top}");
    }

    #[test]
    fn two_mode_kernel_rejects_bad_modes() {
        let basis = FockBasis::full(2).unwrap();
        let mut sv = StateVector::from_amplitudes(
            Arc::clone(&basis),
            vec![C64::from(1.0), C64::from(0.0), C64::from(0.0), C64::from(0.0)],
        )
        .unwrap();
        let k = [[C64::from(1.0); 2]; 2];
        assert!(apply_two_mode_kernel(&mut sv, 0, 5, &k).is_err());
        assert!(apply_two_mode_kernel(&mut sv, 1, 1, &k).is_err());
    }
}
