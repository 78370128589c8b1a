//! Benchmark-only crate: shared fixtures for the criterion kernels.

use fqp_core::fock::{FockBasis, StateVector};
use std::sync::Arc;

/// Normalized random-ish state on `modes` modes with `particles`
/// fermions, deterministic without pulling in an RNG dependency.
pub fn dense_state(modes: usize, particles: usize) -> StateVector {
    let basis = FockBasis::build(modes, Some(particles)).expect("small basis");
    let mut state = StateVector::basis_state(Arc::clone(&basis), basis.state(0)).expect("state");
    let n = state.amplitudes().len();
    for (k, a) in state.amplitudes_mut().iter_mut().enumerate() {
        let x = (k as f64 + 1.0) / (n as f64 + 1.0);
        *a = fqp_core::C64::new((7.3 * x).sin(), (11.9 * x).cos());
    }
    state.normalize();
    state
}
