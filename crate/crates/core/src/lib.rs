//! Exact emulator of a tweezer-array fermionic quantum processor.
//!
//! The crate simulates the native fermionic gate set (tunneling and
//! Rydberg-blockade interaction gates, plus density- and pair-tunneling
//! composites), fermion-qubit mixed registers, circuit-level algorithms
//! (Trotter evolution, disentangled-UCC VQE, iterative phase estimation,
//! Z2 lattice gauge theory steps), the shuttle-gate noise model, and the
//! free-fermion motional-echo experiment.
//!
//! Everything is dense and exact: state vectors over fixed-particle-number
//! Fock sectors, with Jordan-Wigner sign bookkeeping done at the operator
//! level. Dense matrix exponentials and eigensolvers serve as oracles for
//! the closed-form gate kernels.

pub mod circuit;
pub mod decomp;
pub mod echo;
pub mod error;
pub mod fock;
pub mod gates;
pub mod hamiltonian;
pub mod lgt;
pub mod linalg;
pub mod noise;
pub mod optim;
pub mod qpe;
pub mod register;
pub mod trotter;
pub mod vqe;

pub use error::CoreError;
pub use fock::{FockBasis, LadderTerm, StateVector};
pub use gates::GateSpec;
pub use register::{MixedRegister, SiteKind};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
