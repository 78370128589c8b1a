//! Iterative (Kitaev-style) quantum phase estimation with a single
//! reused ancilla qubit.
//!
//! The estimated quantity is the phase fraction phi in [0, 1) of an
//! eigenvalue e^{-2 pi i phi} of the stepped unitary. Bits are
//! extracted least significant first; each round interferes the
//! ancilla with the controlled unitary raised to a power of two,
//! rotates by the feedback correction accumulated from the bits
//! already known, and measures in the rotated basis.
//!
//! Measurement is exact by default: the round's outcome distribution
//! is computed from the amplitudes, the likelier outcome is taken
//! (majority rule at infinite shots) and the ancilla is projected
//! accordingly. On an exact eigenstate with a k-bit phase every round
//! is deterministic (probability 1); any lower round probability is
//! reported as degraded confidence rather than silently accepted.
//! A finite-shot mode behind a seeded flag replaces the exact
//! majority with an empirical one.

use crate::error::CoreError;
use crate::gates::GateSpec;
use crate::register::MixedRegister;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

/// Finite-shot measurement settings.
#[derive(Debug, Clone, Copy)]
pub struct ShotOptions {
    pub shots_per_bit: usize,
    pub seed: u64,
}

/// Result of a phase-estimation run.
#[derive(Debug, Clone)]
pub struct QpeOutcome {
    /// Estimated phase fraction, sum of bits[m] / 2^(m+1).
    pub phase: f64,
    /// Most significant bit first.
    pub bits: Vec<u8>,
    /// Probability (or shot fraction) of the chosen outcome, per
    /// round, in bit order.
    pub round_confidence: Vec<f64>,
    /// Minimum over rounds; 1.0 for an exact eigenstate with an
    /// exactly representable phase.
    pub min_confidence: f64,
}

/// Run iterative phase estimation.
///
/// `register` holds the prepared target state with the ancilla qubit
/// at site `ancilla` in |1~>. `controlled_u` applies the controlled
/// unitary once (control = the ancilla site); it is invoked 2^(m-1)
/// times for bit m. `bits` is the number of binary digits requested.
pub fn iterative_qpe(
    register: &MixedRegister,
    ancilla: usize,
    controlled_u: &mut dyn FnMut(&mut MixedRegister) -> Result<(), CoreError>,
    bits: usize,
    shots: Option<ShotOptions>,
) -> Result<QpeOutcome, CoreError> {
    if bits == 0 || bits > 20 {
        return Err(CoreError::Invalid(format!(
            "bit count {bits} outside 1..=20"
        )));
    }
    if let Some(s) = shots {
        if s.shots_per_bit == 0 {
            return Err(CoreError::Invalid("shot mode needs at least one shot".into()));
        }
    }
    let mut rng = shots.map(|s| ChaCha8Rng::seed_from_u64(s.seed));
    let mut work = register.clone();
    if work.qubit_one_probability(ancilla)? > 1e-12 {
        return Err(CoreError::Invalid(
            "ancilla must start in |1~> (the decoupled state)".into(),
        ));
    }

    let mut known = vec![0u8; bits]; // known[m] = bit m+1 (msb first)
    let mut confidence = Vec::with_capacity(bits);
    for m in (1..=bits).rev() {
        // ancilla into superposition
        work.apply(&GateSpec::QubitRx {
            site: ancilla,
            theta: FRAC_PI_2,
        })?;
        for _ in 0..(1usize << (m - 1)) {
            controlled_u(&mut work)?;
        }
        // feedback: cancel the already-determined lower bits
        let mut frac = 0.0;
        for (n, &b) in known.iter().enumerate().skip(m) {
            frac += f64::from(b) / (1u64 << (n + 2 - m)) as f64;
        }
        work.apply(&GateSpec::QubitRz {
            site: ancilla,
            theta: -2.0 * PI * frac,
        })?;
        work.apply(&GateSpec::QubitRx {
            site: ancilla,
            theta: -FRAC_PI_2,
        })?;

        let p1 = work.qubit_one_probability(ancilla)?;
        let (bit, conf) = match rng.as_mut() {
            None => {
                if p1 > 0.5 {
                    (true, p1)
                } else {
                    (false, 1.0 - p1)
                }
            }
            Some(rng) => {
                let shots = shots.expect("rng implies shot options").shots_per_bit;
                let ones = (0..shots).filter(|_| rng.gen::<f64>() < p1).count();
                let frac = ones as f64 / shots as f64;
                if 2 * ones > shots {
                    (true, frac)
                } else {
                    (false, 1.0 - frac)
                }
            }
        };
        known[m - 1] = u8::from(bit);
        confidence.push(conf);
        work.project_qubit(ancilla, bit)?;
        if bit {
            // return the ancilla to |1~> for the next round
            work.apply(&GateSpec::QubitRx {
                site: ancilla,
                theta: PI,
            })?;
        }
    }

    let phase = known
        .iter()
        .enumerate()
        .map(|(m, &b)| f64::from(b) / (1u64 << (m + 1)) as f64)
        .sum();
    let min_confidence = confidence.iter().copied().fold(1.0f64, f64::min);
    // reorder per-round confidences to bit order (msb first)
    confidence.reverse();
    Ok(QpeOutcome {
        phase,
        bits: known,
        round_confidence: confidence,
        min_confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::SiteKind;
    use crate::C64;

    /// Ancilla + two modes holding |11>: controlled interaction acts
    /// as a controlled global phase e^{-i theta}, so phi = theta/2pi.
    fn phase_register() -> MixedRegister {
        let mut r = MixedRegister::new(
            vec![
                SiteKind::Qubit,
                SiteKind::FermionicMode,
                SiteKind::FermionicMode,
            ],
            Some(2),
        )
        .unwrap();
        r.set_basis_state(0b11, 0).unwrap();
        r
    }

    fn controlled_phase(theta: f64) -> impl FnMut(&mut MixedRegister) -> Result<(), CoreError> {
        move |r: &mut MixedRegister| {
            r.apply(&GateSpec::ControlledInteraction {
                control: 0,
                i: 1,
                j: 2,
                theta,
            })
        }
    }

    #[test]
    fn diagonal_eigenphase_is_exact_at_eight_bits() {
        let r = phase_register();
        let out = iterative_qpe(&r, 0, &mut controlled_phase(FRAC_PI_2), 8, None).unwrap();
        assert_eq!(out.phase, 0.25);
        assert_eq!(out.bits, vec![0, 1, 0, 0, 0, 0, 0, 0]);
        assert!(out.min_confidence > 1.0 - 1e-10, "{}", out.min_confidence);
    }

    #[test]
    fn ten_bit_dyadic_phase_recovered_exactly() {
        // phi = 0.1011010011 binary = 723/1024
        let phi = 723.0 / 1024.0;
        let r = phase_register();
        let out = iterative_qpe(&r, 0, &mut controlled_phase(2.0 * PI * phi), 10, None).unwrap();
        assert_eq!(out.phase, phi);
        assert!(out.min_confidence > 1.0 - 1e-9);
    }

    #[test]
    fn one_bit_of_zero_phase() {
        let r = phase_register();
        let out = iterative_qpe(&r, 0, &mut controlled_phase(0.0), 1, None).unwrap();
        assert_eq!(out.bits, vec![0]);
        assert_eq!(out.phase, 0.0);
    }

    #[test]
    fn tunneling_eigenstate_phase_matches_eigendecomposition() {
        // symmetric single-particle eigenstate of a tunneling gate:
        // U^t(theta1, 0, 0) (|10> + |01>)/sqrt(2) = e^{-i theta1/2} (...)
        let theta1 = PI / 3.0;
        let mut r = MixedRegister::new(
            vec![
                SiteKind::Qubit,
                SiteKind::FermionicMode,
                SiteKind::FermionicMode,
            ],
            Some(1),
        )
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let basis = std::sync::Arc::clone(r.basis());
        let i01 = basis.index_of(0b01).unwrap();
        let i10 = basis.index_of(0b10).unwrap();
        r.amplitudes_mut().fill(C64::from(0.0));
        r.amplitudes_mut()[i01 * 2] = C64::from(s);
        r.amplitudes_mut()[i10 * 2] = C64::from(s);
        let mut cu = |reg: &mut MixedRegister| {
            reg.apply(&GateSpec::ControlledTunneling {
                control: 0,
                i: 1,
                j: 2,
                theta: [theta1, 0.0, 0.0],
            })
        };
        let k = 8;
        let out = iterative_qpe(&r, 0, &mut cu, k, None).unwrap();
        // phi = theta1 / (4 pi) = 1/12, not dyadic: estimate is
        // accurate to the requested resolution, confidence degraded
        let phi = theta1 / (4.0 * PI);
        assert!(
            (out.phase - phi).abs() < 2.0 / (1u64 << k) as f64,
            "estimate {} vs {}",
            out.phase,
            phi
        );
        assert!(out.min_confidence < 1.0 - 1e-6);
    }

    #[test]
    fn non_eigenstate_reports_degraded_confidence() {
        // equal superposition of phases 0 and 1/2
        let mut r = MixedRegister::new(
            vec![
                SiteKind::Qubit,
                SiteKind::FermionicMode,
                SiteKind::FermionicMode,
            ],
            None,
        )
        .unwrap();
        let basis = std::sync::Arc::clone(r.basis());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let i00 = basis.index_of(0b00).unwrap();
        let i11 = basis.index_of(0b11).unwrap();
        r.amplitudes_mut().fill(C64::from(0.0));
        r.amplitudes_mut()[i00 * 2] = C64::from(s);
        r.amplitudes_mut()[i11 * 2] = C64::from(s);
        let out = iterative_qpe(&r, 0, &mut controlled_phase(PI), 4, None).unwrap();
        // the least-significant round sees both branches equally
        assert!(out.min_confidence < 0.75, "{}", out.min_confidence);
    }

    #[test]
    fn shot_mode_is_seeded_and_agrees_on_clean_eigenstates() {
        let r = phase_register();
        let shots = Some(ShotOptions {
            shots_per_bit: 51,
            seed: 9,
        });
        let a = iterative_qpe(&r, 0, &mut controlled_phase(FRAC_PI_2), 8, shots).unwrap();
        let b = iterative_qpe(&r, 0, &mut controlled_phase(FRAC_PI_2), 8, shots).unwrap();
        assert_eq!(a.phase, 0.25);
        assert_eq!(a.bits, b.bits);
        assert_eq!(a.round_confidence, b.round_confidence);
    }

    #[test]
    fn input_validation() {
        let r = phase_register();
        assert!(iterative_qpe(&r, 0, &mut controlled_phase(1.0), 0, None).is_err());
        assert!(iterative_qpe(&r, 0, &mut controlled_phase(1.0), 21, None).is_err());
        let shots = Some(ShotOptions {
            shots_per_bit: 0,
            seed: 0,
        });
        assert!(iterative_qpe(&r, 0, &mut controlled_phase(1.0), 4, shots).is_err());
        // ancilla not in |1~>
        let mut bad = phase_register();
        bad.apply(&GateSpec::QubitRx {
            site: 0,
            theta: PI,
        })
        .unwrap();
        assert!(iterative_qpe(&bad, 0, &mut controlled_phase(1.0), 4, None).is_err());
    }
}
