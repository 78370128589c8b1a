//! TOML run configuration: one file with an optional table per
//! subcommand. Missing tables fall back to documented defaults;
//! unknown keys are rejected so typos fail loudly (exit code 2).

use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub verify_decomp: DecompConfig,
    pub trotter: TrotterConfig,
    pub vqe: VqeConfig,
    pub lgt: LgtConfig,
    pub qpe: QpeConfig,
    pub echo: EchoConfig,
    pub noise_budget: BudgetConfig,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                toml::from_str(&text).map_err(|e| format!("config {}: {e}", p.display()))
            }
        }
    }
}

/// Decomposition sweep: both depth-5 templates over a theta grid,
/// plus the honest single-gate probe whose failure is reported as a
/// falsification rather than an error.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecompConfig {
    /// Grid points per angle axis.
    pub grid: usize,
    pub theta1_range: [f64; 2],
    pub theta2_range: [f64; 2],
    pub tolerance: f64,
    pub restarts: usize,
    pub single_gate_probe: bool,
    pub single_gate_restarts: usize,
}

impl Default for DecompConfig {
    fn default() -> Self {
        Self {
            grid: 5,
            theta1_range: [0.4, 2.0],
            theta2_range: [-1.6, 1.6],
            tolerance: 1e-9,
            restarts: 16,
            single_gate_probe: true,
            single_gate_restarts: 8,
        }
    }
}

/// Trotter convergence study: error vs step size against the dense
/// exponential. Without a Hamiltonian file a seeded random 4-mode
/// Hamiltonian with non-commuting terms is generated.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrotterConfig {
    pub hamiltonian: Option<PathBuf>,
    pub modes: usize,
    pub time: f64,
    pub dts: Vec<f64>,
    pub slope_range: [f64; 2],
}

impl Default for TrotterConfig {
    fn default() -> Self {
        Self {
            hamiltonian: None,
            modes: 4,
            time: 1.0,
            dts: vec![0.2, 0.1, 0.05, 0.025],
            slope_range: [0.8, 1.2],
        }
    }
}

/// VQE run: built-in two-site Hubbard dimer (t = 1, U = 4, spin
/// orbitals (site, spin) -> 2*site + spin... modes 0..3) unless a
/// Hamiltonian file and reference occupation are given.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VqeConfig {
    pub hamiltonian: Option<PathBuf>,
    /// Reference determinant as an occupation bitmask (mode j = bit j).
    pub reference: Option<u64>,
    /// |E - E0| acceptance bound in energy units of the Hamiltonian.
    pub delta_e_max: f64,
    pub max_evaluations: usize,
    pub f_tolerance: f64,
    pub noise: Option<NoiseSweepConfig>,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            hamiltonian: None,
            reference: None,
            delta_e_max: 1e-8,
            max_evaluations: 40_000,
            f_tolerance: 1e-12,
            noise: None,
        }
    }
}

/// Monte-Carlo fluctuation sweep attached to a VQE run.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSweepConfig {
    /// Trap-frequency widths relative to omega_r.
    pub widths_wr: Vec<f64>,
    /// Position widths relative to the zero-point lengths.
    pub widths_r: Vec<f64>,
    pub samples: usize,
    /// Shuttle pulse time in seconds.
    pub pulse_time: f64,
}

impl Default for NoiseSweepConfig {
    fn default() -> Self {
        Self {
            widths_wr: vec![0.0, 0.002, 0.005],
            widths_r: vec![0.0, 0.02, 0.05],
            samples: 200,
            pulse_time: 1e-4,
        }
    }
}

/// Single-plaquette Z2 gauge theory Trotter run.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LgtConfig {
    pub lambda_e: f64,
    pub lambda_b: f64,
    pub lambda_j: f64,
    pub lambda_m: f64,
    pub dt: f64,
    pub steps: usize,
    /// Gauss-law drift bound.
    pub tolerance: f64,
}

impl Default for LgtConfig {
    fn default() -> Self {
        Self {
            lambda_e: 1.0,
            lambda_b: 0.8,
            lambda_j: 0.6,
            lambda_m: 0.5,
            dt: 0.05,
            steps: 100,
            tolerance: 1e-10,
        }
    }
}

/// Iterative phase estimation cases.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QpeConfig {
    pub bits: usize,
    /// Diagonal test phases; must be representable in `bits` binary
    /// digits.
    pub dyadic_phases: Vec<f64>,
    /// theta1 of the tunneling-gate eigenphase case.
    pub tunneling_theta: f64,
}

impl Default for QpeConfig {
    fn default() -> Self {
        Self {
            bits: 8,
            dyadic_phases: vec![0.25, 0.70703125],
            tunneling_theta: std::f64::consts::FRAC_PI_3,
        }
    }
}

/// Motional-echo experiment sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EchoConfig {
    pub l: usize,
    pub n_atoms: usize,
    pub j: f64,
    pub tau: f64,
    /// Disorder strength in units of the hopping rate.
    pub sigma_theta: f64,
    /// Number of disorder seeds (derived from the base seed).
    pub seeds: usize,
    pub horizon: usize,
    pub threshold: f64,
    /// Acceptance bound on the median useful-time ratio
    /// (cyclic-shift vs static); ignored when sigma_theta = 0.
    pub min_ratio: f64,
}

impl Default for EchoConfig {
    fn default() -> Self {
        Self {
            l: 100,
            n_atoms: 20,
            j: 1.0,
            tau: 0.13,
            sigma_theta: 0.035,
            seeds: 10,
            horizon: 20_000,
            threshold: 0.9,
            min_ratio: 50.0,
        }
    }
}

/// Hardware budget report inputs.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    /// Radial trap frequency (Hz, not angular).
    pub trap_freq_hz: f64,
    /// Rydberg gate time (s).
    pub gate_time: f64,
    /// Trap depth (Hz) for the dephasing estimate.
    pub depth_hz: f64,
    /// Relative trap-depth fluctuation.
    pub depth_rel_sigma: f64,
    /// Single shuttle move time (s).
    pub move_time: f64,
    /// Moves per algorithm.
    pub operations: usize,
    pub heating_max: f64,
    pub t2_range: [f64; 2],
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            trap_freq_hz: 15e3,
            gate_time: 100e-9,
            depth_hz: 50e3,
            depth_rel_sigma: 0.002,
            move_time: 500e-6,
            operations: 1000,
            heating_max: 1e-4,
            t2_range: [1e-3, 3e-3],
        }
    }
}
