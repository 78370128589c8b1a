//! Disentangled unitary coupled-cluster ansatz, variational energy
//! minimization, and the Monte-Carlo noisy-energy study.
//!
//! The ansatz is a fixed-order product of parameterized gates acting
//! on a reference determinant: pair-tunneling gates for the double
//! excitations followed by tunneling gates for the single
//! excitations, both with the internal phase pinned to pi/2 so every
//! factor is a real rotation. Product ordering changes the energies a
//! disentangled ansatz can reach, so the order — doubles before
//! singles, lexicographic in the excitation indices — is part of this
//! module's contract rather than an implementation detail.
//!
//! The noisy path replays the optimized circuit with every tunneling
//! gate executed through the three-pulse shuttle composition, each
//! pulse carrying an independent fluctuation draw; interaction-type
//! gates are applied exactly. Leakage into the transport trap makes
//! the evolved state sub-normalized, and the energy is evaluated on
//! the renormalized state (a post-selected reading of the lost
//! population).

use crate::circuit::Circuit;
use crate::error::CoreError;
use crate::fock::{FockBasis, StateVector};
use crate::gates::{apply_two_mode_kernel, GateSpec};
use crate::hamiltonian::SecondQuantizedHamiltonian as Hamiltonian;
use crate::noise::{noisy_shuttle_kernel, NoiseDistribution, TrapParams};
use crate::optim::{nelder_mead, NelderMeadOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

/// Disentangled coupled-cluster ansatz over a reference determinant.
#[derive(Debug, Clone)]
pub struct UCCAnsatz {
    mode_count: usize,
    reference: u64,
    /// (occupied i, virtual a), lexicographic.
    singles: Vec<(usize, usize)>,
    /// (occupied i < j, virtual a < b), lexicographic in (i, j, a, b).
    doubles: Vec<(usize, usize, usize, usize)>,
}

impl UCCAnsatz {
    /// Enumerate all single and double excitations of the reference
    /// determinant `reference` (bit j = occupation of mode j).
    pub fn new(mode_count: usize, reference: u64) -> Result<Self, CoreError> {
        if mode_count == 0 || mode_count > 64 || reference >> mode_count != 0 {
            return Err(CoreError::Invalid(format!(
                "reference {reference:#b} does not fit in {mode_count} modes"
            )));
        }
        let occupied: Vec<usize> = (0..mode_count).filter(|&m| reference >> m & 1 == 1).collect();
        let virtuals: Vec<usize> = (0..mode_count).filter(|&m| reference >> m & 1 == 0).collect();
        let mut singles = Vec::new();
        for &i in &occupied {
            for &a in &virtuals {
                singles.push((i, a));
            }
        }
        let mut doubles = Vec::new();
        for (x, &i) in occupied.iter().enumerate() {
            for &j in &occupied[x + 1..] {
                for (y, &a) in virtuals.iter().enumerate() {
                    for &b in &virtuals[y + 1..] {
                        doubles.push((i, j, a, b));
                    }
                }
            }
        }
        Ok(Self {
            mode_count,
            reference,
            singles,
            doubles,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn reference(&self) -> u64 {
        self.reference
    }

    pub fn particle_number(&self) -> usize {
        self.reference.count_ones() as usize
    }

    pub fn singles(&self) -> &[(usize, usize)] {
        &self.singles
    }

    pub fn doubles(&self) -> &[(usize, usize, usize, usize)] {
        &self.doubles
    }

    /// Parameter layout: doubles first, then singles, each in the
    /// enumeration order of the tables.
    pub fn parameter_count(&self) -> usize {
        self.doubles.len() + self.singles.len()
    }

    /// Reference determinant as a state in the particle-number sector.
    pub fn reference_state(&self) -> Result<StateVector, CoreError> {
        let basis = FockBasis::build(self.mode_count, Some(self.particle_number()))?;
        StateVector::basis_state(basis, self.reference)
    }

    /// Build the ansatz circuit at the given parameter vector.
    pub fn build_circuit(&self, parameters: &[f64]) -> Result<Circuit, CoreError> {
        if parameters.len() != self.parameter_count() {
            return Err(CoreError::ParameterLength {
                got: parameters.len(),
                expected: self.parameter_count(),
            });
        }
        let mut circuit = Circuit::new();
        let (dbl, sgl) = parameters.split_at(self.doubles.len());
        for (&(i, j, a, b), &theta) in self.doubles.iter().zip(dbl) {
            // excitation c†_a c†_b c_j c_i and its reverse
            circuit.push(GateSpec::PairTunneling {
                i: a,
                j: b,
                k: j,
                l: i,
                theta: [theta, FRAC_PI_2],
            })?;
        }
        for (&(i, a), &theta) in self.singles.iter().zip(sgl) {
            // excitation c†_a c_i and its reverse
            circuit.push(GateSpec::Tunneling {
                i: a,
                j: i,
                theta: [theta, FRAC_PI_2, 0.0],
            })?;
        }
        Ok(circuit)
    }

    /// Prepare |psi(theta)> from the reference.
    pub fn prepare(&self, parameters: &[f64]) -> Result<StateVector, CoreError> {
        let mut state = self.reference_state()?;
        self.build_circuit(parameters)?.apply(&mut state)?;
        Ok(state)
    }
}

/// Result of a variational minimization.
#[derive(Debug, Clone)]
pub struct VQEResult {
    /// Optimal parameters, doubles-then-singles layout.
    pub parameters: Vec<f64>,
    /// Variational energy at the optimum.
    pub energy: f64,
    /// Exact-diagonalization ground energy in the same sector.
    pub reference_energy: f64,
    /// energy - reference_energy.
    pub delta_e: f64,
    /// Objective evaluations spent.
    pub evaluations: usize,
    /// Whether the simplex tolerances (not the budget) stopped the run.
    pub converged: bool,
}

/// Ansatz energy at a parameter point.
pub fn energy(
    hamiltonian: &Hamiltonian,
    ansatz: &UCCAnsatz,
    parameters: &[f64],
) -> Result<f64, CoreError> {
    hamiltonian.expectation(&ansatz.prepare(parameters)?)
}

/// Minimize the ansatz energy from zero-initialized parameters with
/// Nelder-Mead, and report the gap to the exact ground energy.
pub fn optimize(
    hamiltonian: &Hamiltonian,
    ansatz: &UCCAnsatz,
    options: &NelderMeadOptions,
) -> Result<VQEResult, CoreError> {
    if hamiltonian.mode_count() != ansatz.mode_count() {
        return Err(CoreError::Invalid(format!(
            "hamiltonian has {} modes, ansatz has {}",
            hamiltonian.mode_count(),
            ansatz.mode_count()
        )));
    }
    let reference = ansatz.reference_state()?;
    let basis = Arc::clone(reference.basis());
    let (e0, _) = hamiltonian.ground_state(&basis)?;

    let mut failure: Option<CoreError> = None;
    let mut objective = |theta: &[f64]| -> f64 {
        match energy(hamiltonian, ansatz, theta) {
            Ok(e) => e,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let x0 = vec![0.0; ansatz.parameter_count()];
    let min = nelder_mead(&mut objective, &x0, options)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(VQEResult {
        delta_e: min.value - e0,
        energy: min.value,
        reference_energy: e0,
        parameters: min.x,
        evaluations: min.evaluations,
        converged: min.converged,
    })
}

/// Noise configuration of the Monte-Carlo energy study.
#[derive(Debug, Clone, Copy)]
pub struct NoisyRun {
    pub trap: TrapParams,
    pub distribution: NoiseDistribution,
    /// Time of each shuttle pulse (s).
    pub pulse_time: f64,
}

/// Mean energy offset over Monte-Carlo noise realizations.
#[derive(Debug, Clone)]
pub struct NoisyEnergy {
    /// Mean of E_sample - reference_energy.
    pub mean_delta_e: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    pub samples: usize,
}

/// Execute the circuit once with one independent fluctuation draw per
/// shuttle pulse. Tunneling gates go through the noisy three-pulse
/// shuttle kernel; all other gates are exact. When every draw is
/// exactly zero (degenerate distribution) the ideal gate is applied
/// instead, so the zero-width path reproduces the noiseless
/// amplitudes bit for bit.
fn run_noisy_circuit(
    circuit: &Circuit,
    state: &mut StateVector,
    run: &NoisyRun,
    rng: &mut ChaCha8Rng,
) -> Result<(), CoreError> {
    for gate in circuit.gates() {
        match *gate {
            GateSpec::Tunneling { i, j, theta } => {
                let samples = [
                    run.distribution.sample(&run.trap, run.pulse_time, rng),
                    run.distribution.sample(&run.trap, run.pulse_time, rng),
                    run.distribution.sample(&run.trap, run.pulse_time, rng),
                ];
                let ideal = samples
                    .iter()
                    .all(|s| s.delta_r == 0.0 && s.delta_z == 0.0 && s.delta_omega == 0.0);
                if ideal {
                    gate.apply(state)?;
                } else {
                    let kernel = noisy_shuttle_kernel(theta, run.pulse_time, &samples, &run.trap)?;
                    apply_two_mode_kernel(state, i, j, &kernel)?;
                }
            }
            _ => gate.apply(state)?,
        }
    }
    Ok(())
}

/// Monte-Carlo mean of delta E = E_noisy(theta) - e0 over `samples`
/// independent circuit executions. Deterministic in `seed`; each
/// sample runs on its own derived stream, so results do not depend on
/// evaluation order.
pub fn noisy_energy_mc(
    hamiltonian: &Hamiltonian,
    ansatz: &UCCAnsatz,
    parameters: &[f64],
    run: &NoisyRun,
    samples: usize,
    seed: u64,
) -> Result<NoisyEnergy, CoreError> {
    if samples < 2 {
        return Err(CoreError::Invalid(
            "Monte-Carlo estimate needs at least 2 samples".into(),
        ));
    }
    let circuit = ansatz.build_circuit(parameters)?;
    let reference = ansatz.reference_state()?;
    let basis = Arc::clone(reference.basis());
    let (e0, _) = hamiltonian.ground_state(&basis)?;

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for k in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut state = ansatz.reference_state()?;
        run_noisy_circuit(&circuit, &mut state, run, &mut rng)?;
        state.normalize();
        let de = hamiltonian.expectation(&state)? - e0;
        sum += de;
        sum_sq += de * de;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(NoisyEnergy {
        mean_delta_e: mean,
        stderr: (var / n).sqrt(),
        samples,
    })
}

/// One cell of the fluctuation-grid sweep.
#[derive(Debug, Clone)]
pub struct NoiseGridCell {
    /// Trap-frequency width relative to omega_r.
    pub delta_wr: f64,
    /// Position width relative to r_zp (used for both axes).
    pub delta_r: f64,
    pub mean_delta_e: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Sweep mean delta E over a (frequency width, position width) grid.
/// Cell (a, b) uses derived seed `seed + a * widths_r.len() + b`, so a
/// cell's result is independent of which other cells are computed.
pub fn sweep_noise_grid(
    hamiltonian: &Hamiltonian,
    ansatz: &UCCAnsatz,
    parameters: &[f64],
    trap: &TrapParams,
    pulse_time: f64,
    widths_wr: &[f64],
    widths_r: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<NoiseGridCell>, CoreError> {
    let mut cells = Vec::with_capacity(widths_wr.len() * widths_r.len());
    for (a, &wr) in widths_wr.iter().enumerate() {
        for (b, &r) in widths_r.iter().enumerate() {
            let run = NoisyRun {
                trap: *trap,
                distribution: NoiseDistribution::new(wr, r, r)?,
                pulse_time,
            };
            let cell_seed = seed.wrapping_add((a * widths_r.len() + b) as u64);
            let est = noisy_energy_mc(hamiltonian, ansatz, parameters, &run, samples, cell_seed)?;
            cells.push(NoiseGridCell {
                delta_wr: wr,
                delta_r: r,
                mean_delta_e: est.mean_delta_e,
                stderr: est.stderr,
                samples,
            });
        }
    }
    Ok(cells)
}
