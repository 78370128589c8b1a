//! Shuttle-gate error model and experimental budget formulas: optical
//! tweezer trap geometry, Gaussian ground-state overlap of displaced
//! storage/transport traps, perturbed pulse parameters, and the
//! back-of-envelope heating/dephasing/wall-time numbers.
//!
//! Internally everything is SI with hbar = 1, so energies are angular
//! frequencies (rad/s), lengths are meters, and masses carry units of
//! s/m^2 (kg divided by hbar). Constructors accept lab units (kHz trap
//! depth as h x frequency, micrometers, amu).
//!
//! The overlap factor is often quoted as a radial integral with a
//! 2 pi r measure; taken literally on the half-line that form is
//! neither normalizable nor symmetric under delta_r -> -delta_r. It
//! is implemented here as the planar two-dimensional displacement
//! integral (which reduces to the radial form at delta_r = 0), with
//! wavefunctions normalized numerically so f(0,0) = 1 holds exactly;
//! the 2D integral factorizes per axis, and the factorized quadrature
//! is cross-checked in tests against both literal nested 2D
//! quadrature and the closed-form Gaussian overlap.

use crate::error::CoreError;
use crate::gates::{shuttle_sequence, tunneling_block};
use crate::C64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Planck's reduced constant (J s).
const HBAR: f64 = 1.054_571_817e-34;
/// Atomic mass unit (kg).
const AMU: f64 = 1.660_539_066_60e-27;

/// Tweezer trap geometry and derived harmonic-oscillator scales.
#[derive(Debug, Clone, Copy)]
pub struct TrapParams {
    /// Trap depth as an angular frequency (rad/s).
    pub v0: f64,
    /// Beam waist (m).
    pub w0: f64,
    /// Trapping wavelength (m).
    pub lambda: f64,
    /// Atomic mass over hbar (s/m^2).
    pub mass: f64,
}

impl TrapParams {
    /// Build from lab units: trap depth in kHz (as h x frequency),
    /// waist and wavelength in micrometers, mass in amu.
    pub fn from_lab(
        v0_khz: f64,
        w0_um: f64,
        lambda_um: f64,
        mass_amu: f64,
    ) -> Result<Self, CoreError> {
        if v0_khz <= 0.0 || w0_um <= 0.0 || lambda_um <= 0.0 || mass_amu <= 0.0 {
            return Err(CoreError::Invalid(
                "trap parameters must all be positive".into(),
            ));
        }
        Ok(Self {
            v0: 2.0 * std::f64::consts::PI * v0_khz * 1e3,
            w0: w0_um * 1e-6,
            lambda: lambda_um * 1e-6,
            mass: mass_amu * AMU / HBAR,
        })
    }

    /// Documented default geometry: 50 kHz lithium-6 tweezer at 1.2 um
    /// waist and 532 nm trapping light, which lands the radial
    /// frequency at ~2 pi x 15 kHz and the radial/axial ratio at ~10.
    pub fn default_lithium() -> Self {
        Self::from_lab(50.0, 1.2, 0.532, 6.015).expect("static defaults are valid")
    }

    /// Rayleigh length z_R = pi w0^2 / lambda.
    pub fn rayleigh_length(&self) -> f64 {
        std::f64::consts::PI * self.w0 * self.w0 / self.lambda
    }

    /// Radial trap frequency omega_r = sqrt(4 V0 / (m w0^2)).
    pub fn omega_r(&self) -> f64 {
        (4.0 * self.v0 / (self.mass * self.w0 * self.w0)).sqrt()
    }

    /// Axial trap frequency omega_z = sqrt(2 V0 / (m z_R^2)).
    pub fn omega_z(&self) -> f64 {
        let zr = self.rayleigh_length();
        (2.0 * self.v0 / (self.mass * zr * zr)).sqrt()
    }

    /// Radial zero-point length r_zp = 1 / sqrt(2 m omega_r).
    pub fn r_zp(&self) -> f64 {
        1.0 / (2.0 * self.mass * self.omega_r()).sqrt()
    }

    /// Axial zero-point length z_zp = 1 / sqrt(2 m omega_z).
    pub fn z_zp(&self) -> f64 {
        1.0 / (2.0 * self.mass * self.omega_z()).sqrt()
    }
}

/// Independent Gaussian widths of the fluctuation model, expressed as
/// fractions of the natural scales (omega_r, r_zp, z_zp).
#[derive(Debug, Clone, Copy)]
pub struct NoiseDistribution {
    pub delta_omega_rel: f64,
    pub delta_r_rel: f64,
    pub delta_z_rel: f64,
}

impl NoiseDistribution {
    pub fn new(
        delta_omega_rel: f64,
        delta_r_rel: f64,
        delta_z_rel: f64,
    ) -> Result<Self, CoreError> {
        if delta_omega_rel < 0.0 || delta_r_rel < 0.0 || delta_z_rel < 0.0 {
            return Err(CoreError::Invalid(
                "noise widths must be non-negative".into(),
            ));
        }
        Ok(Self {
            delta_omega_rel,
            delta_r_rel,
            delta_z_rel,
        })
    }

    /// Draw one absolute-unit sample; `tau` is the pulse time the
    /// sample applies to. Zero widths draw exactly zero.
    pub fn sample<R: Rng + ?Sized>(&self, trap: &TrapParams, tau: f64, rng: &mut R) -> NoiseSample {
        let draw = |width: f64, rng: &mut R| -> f64 {
            if width == 0.0 {
                0.0
            } else {
                Normal::new(0.0, width).expect("validated width").sample(rng)
            }
        };
        NoiseSample {
            delta_r: draw(self.delta_r_rel * trap.r_zp(), rng),
            delta_z: draw(self.delta_z_rel * trap.z_zp(), rng),
            delta_omega: draw(self.delta_omega_rel * trap.omega_r(), rng),
            tau,
        }
    }
}

/// One realization of the fluctuations for a single pulse.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSample {
    /// Radial tweezer displacement (m).
    pub delta_r: f64,
    /// Axial tweezer displacement (m).
    pub delta_z: f64,
    /// Radial frequency offset (rad/s).
    pub delta_omega: f64,
    /// Pulse time (s).
    pub tau: f64,
}

impl NoiseSample {
    pub fn zero(tau: f64) -> Self {
        Self {
            delta_r: 0.0,
            delta_z: 0.0,
            delta_omega: 0.0,
            tau,
        }
    }

    /// Storage/transport trap-depth mismatch implied by the frequency
    /// offset through V0 = m omega_r^2 w0^2 / 4.
    pub fn delta_v0(&self, trap: &TrapParams) -> f64 {
        2.0 * trap.v0 * self.delta_omega / trap.omega_r()
    }
}

/// Adaptive Simpson quadrature on [a, b].
fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, CoreError> {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> Result<f64, CoreError> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let err = left + right - whole;
        if err.abs() < 15.0 * tol {
            return Ok(left + right + err / 15.0);
        }
        if depth == 0 {
            return Err(CoreError::QuadratureDiverged(err.abs()));
        }
        Ok(recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, m, b, fa, fm, fb, whole, tol, 48)
}

/// Ground-state overlap factor f(delta_r, delta_z) in (0, 1].
///
/// The planar displacement integral factorizes: the coordinate
/// transverse to the displacement contributes the same Gaussian
/// integral at every displacement and cancels in the normalization,
/// leaving one dimensionless 1D quadrature ratio per axis. The nested
/// 2D form is retained in the tests as a cross-check.
pub fn overlap_factor(
    delta_r: f64,
    delta_z: f64,
    trap: &TrapParams,
) -> Result<f64, CoreError> {
    let g0 = gauss_overlap_1d(0.0)?;
    Ok(gauss_overlap_1d(delta_r / trap.r_zp())? / g0
        * gauss_overlap_1d(delta_z / trap.z_zp())? / g0)
}

/// Dimensionless 1D displaced-Gaussian overlap
/// integral of exp(-(u^2 + (u + delta)^2) / 4) over the real line,
/// truncated where the integrand is below 1e-28.
fn gauss_overlap_1d(delta: f64) -> Result<f64, CoreError> {
    let half = 12.0 + delta.abs();
    let f = |u: f64| (-(u * u + (u + delta) * (u + delta)) / 4.0).exp();
    adaptive_simpson(&f, -half, half, 1e-13)
}

/// Closed-form Gaussian-overlap companion used as an oracle:
/// exp(-delta_r^2 / 8 r_zp^2) exp(-delta_z^2 / 8 z_zp^2).
pub fn overlap_factor_closed_form(delta_r: f64, delta_z: f64, trap: &TrapParams) -> f64 {
    let s = trap.r_zp();
    let z = trap.z_zp();
    (-delta_r * delta_r / (8.0 * s * s)).exp() * (-delta_z * delta_z / (8.0 * z * z)).exp()
}

/// A resonant-frame pulse between two trap levels: rotation generated
/// by Rabi coupling `rabi` at phase `phase` with detuning `detuning`,
/// held for `duration`. Realizes the tunneling block with
/// theta = [2 Omega tau, phase, 2 Delta tau].
#[derive(Debug, Clone, Copy)]
pub struct Pulse {
    pub rabi: f64,
    pub detuning: f64,
    pub phase: f64,
    pub duration: f64,
}

impl Pulse {
    /// Express a tunneling-style angle triple as a pulse of the given
    /// duration.
    pub fn from_theta(theta: [f64; 3], tau: f64) -> Self {
        Self {
            rabi: theta[0] / (2.0 * tau),
            detuning: theta[2] / (2.0 * tau),
            phase: theta[1],
            duration: tau,
        }
    }

    pub fn theta(&self) -> [f64; 3] {
        [
            2.0 * self.rabi * self.duration,
            self.phase,
            2.0 * self.detuning * self.duration,
        ]
    }

    /// 2x2 rotation block of this pulse on the {a, b} trap pair.
    pub fn block(&self) -> [[C64; 2]; 2] {
        tunneling_block(self.theta(), 1.0)
    }

    /// Perturbed version of this pulse under one fluctuation sample:
    /// Rabi coupling and detuning scale by the overlap factor, the
    /// trap-depth mismatch adds to the detuning, and the same mismatch
    /// contributes an extra Z angle delta_V0 tau.
    pub fn perturbed(
        &self,
        sample: &NoiseSample,
        trap: &TrapParams,
    ) -> Result<PerturbedPulse, CoreError> {
        let f = overlap_factor(sample.delta_r, sample.delta_z, trap)?;
        let dv0 = sample.delta_v0(trap);
        Ok(PerturbedPulse {
            pulse: Pulse {
                rabi: self.rabi * f,
                detuning: self.detuning * f + dv0,
                phase: self.phase,
                duration: self.duration,
            },
            extra_z: dv0 * self.duration,
        })
    }
}

/// A pulse after fluctuation, together with the extra Z angle from the
/// storage/transport depth mismatch.
#[derive(Debug, Clone, Copy)]
pub struct PerturbedPulse {
    pub pulse: Pulse,
    pub extra_z: f64,
}

impl PerturbedPulse {
    /// 2x2 block: Rz(extra_z) composed after the perturbed rotation.
    pub fn block(&self) -> [[C64; 2]; 2] {
        let u = self.pulse.block();
        let zp = C64::from_polar(1.0, -0.5 * self.extra_z);
        let zm = C64::from_polar(1.0, 0.5 * self.extra_z);
        [[zp * u[0][0], zp * u[0][1]], [zm * u[1][0], zm * u[1][1]]]
    }
}

/// Single-particle 2x2 kernel of the full shuttle protocol for a
/// tunneling gate with angles `theta`, with one independent
/// fluctuation sample per pulse. The kernel is the (storage_i,
/// storage_j) restriction of the unitary three-trap product; it is
/// sub-unitary when population leaks into the transport trap.
pub fn noisy_shuttle_kernel(
    theta: [f64; 3],
    tau: f64,
    samples: &[NoiseSample; 3],
    trap: &TrapParams,
) -> Result<[[C64; 2]; 2], CoreError> {
    // single-particle basis {storage_i = 0, transport = 1, storage_j = 2}
    let mut m = [[C64::from(0.0); 3]; 3];
    for (d, row) in m.iter_mut().enumerate() {
        row[d] = C64::from(1.0);
    }
    for (pulse, sample) in shuttle_sequence(theta).iter().zip(samples) {
        let b = Pulse::from_theta(pulse.theta, tau)
            .perturbed(sample, trap)?
            .block();
        let (a, c) = (pulse.a, pulse.b);
        let mut next = m;
        for col in 0..3 {
            next[a][col] = b[0][0] * m[a][col] + b[0][1] * m[c][col];
            next[c][col] = b[1][0] * m[a][col] + b[1][1] * m[c][col];
        }
        m = next;
    }
    Ok([[m[0][0], m[0][2]], [m[2][0], m[2][2]]])
}

/// Probability of motional excitation when the trap is pulsed off for
/// a Rydberg gate: (omega t)^2 / 4, capped at 1.
pub fn rydberg_heating_probability(omega: f64, t_gate: f64) -> f64 {
    let p = (omega * t_gate).powi(2) / 4.0;
    p.min(1.0)
}

/// Dephasing-time estimate T2* = 1 / (2 pi sigma_abs) with sigma_abs =
/// trap depth (Hz) x relative spread. Returns None (unbounded) at zero
/// spread. A declared reconstruction for budget reporting only; never
/// used inside simulation paths.
pub fn dephasing_time_estimate(depth_hz: f64, relative_sigma: f64) -> Option<f64> {
    if relative_sigma == 0.0 {
        return None;
    }
    Some(1.0 / (2.0 * std::f64::consts::PI * depth_hz * relative_sigma))
}

/// Total wall time of `operations` reconfigurations at `move_time`
/// seconds per move.
pub fn motion_budget(move_time: f64, operations: usize) -> f64 {
    move_time * operations as f64
}
