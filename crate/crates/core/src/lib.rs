//! Numerical toolkit for hybrid oscillator-qubit control in truncated Fock
//! space: the phase-space instruction set (conditional displacements and
//! qubit rotations), non-Abelian composite pulses, deterministic bosonic
//! state preparation, GKP-code stabilization/readout/gate-teleportation, and
//! oscillator-assisted phase estimation.
//!
//! Quadratures follow Wigner units throughout: `x = (a + a†)/2`,
//! `p = (a − a†)/2i`, `[x, p] = i/2`, vacuum `δx = δp = 1/2`. The qubit
//! convention is `σz|g⟩ = +|g⟩`.

pub mod acceptance;
pub mod error;
pub mod gkp;
pub mod hilbert;
pub mod instr;
pub mod noise;
pub mod phase_est;
pub mod prep;
pub mod pulses;

pub use error::{Error, Result};

/// Complex scalar used everywhere.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMat = ndarray::Array2<C64>;

/// Dense complex vector.
pub type CVec = ndarray::Array1<C64>;
